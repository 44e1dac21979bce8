#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace mixrip {

// Format a double with 17 significant digits (round-trip exact).
std::string fmt17(double x);

// Halton low-discrepancy sequence point, components in (0,1).
// index is 1-based; dimension limited by the internal prime table.
std::vector<double> halton_point(std::uint64_t index, int dim);

// Inverse standard normal CDF (Acklam's rational approximation, |err| < 1.2e-9).
double norminv(double p);

// Maximize a unimodal function on [a,b] by golden-section search.
double golden_section_max(const std::function<double(double)>& f, double a, double b,
                          double tol, double* arg = nullptr);

// Nelder-Mead simplex minimization. Returns best value, best point in x.
double nelder_mead_min(const std::function<double(const std::vector<double>&)>& f,
                       std::vector<double>& x, double step, int max_iter);

// Gauss-Legendre nodes and weights on [a,b].
void gauss_legendre(int n, double a, double b,
                    std::vector<double>& nodes, std::vector<double>& weights);

// Two-sided Kolmogorov-Smirnov critical value at level alpha (asymptotic).
double ks_critical(std::size_t n, double alpha);

// Run fn(i) for i in [0,n) on up to n_threads workers. fn must be thread-safe
// per index; iteration order within a worker is deterministic but callers must
// not rely on cross-worker ordering (use per-index streams and buffers).
void parallel_for(std::size_t n, int n_threads, const std::function<void(std::size_t)>& fn);

// Global worker cap used by experiments when no explicit thread count is given.
int default_threads();
void set_default_threads(int n);

} // namespace mixrip
