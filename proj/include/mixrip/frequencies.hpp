#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mixrip/kernels.hpp"

namespace mixrip {

// Radial weight function w(||omega||). RadialTable weights are normalized to
// kappa-compatibility (integral of w^2 against the spectral density equals 1)
// and carry the radial law of Lambda = w^2 * spectral density for sampling.
class WeightFunction {
public:
    enum class Kind { Flat, RadialTable };

    static WeightFunction flat();
    // Builds a table from a raw radial profile, rescales it for compatibility.
    // Only supported for the Dirac base with identity covariance.
    static WeightFunction radial(const std::function<double(double)>& w_raw,
                                 const KernelSpec& spec, int table_size = 4096);

    Kind kind() const { return kind_; }
    double operator()(double r) const;
    // Residual of the compatibility integral (0 for Flat by construction).
    double compatibility_residual() const { return compat_residual_; }
    // Inverse CDF of the radial law of Lambda (RadialTable only).
    double sample_radius(double u) const;
    double r_max() const { return r_max_; }

private:
    Kind kind_ = Kind::Flat;
    std::vector<double> r_grid_;
    std::vector<double> w_vals_;
    std::vector<double> cdf_;
    double r_max_ = 0.0;
    double compat_residual_ = 0.0;
};

enum class Scheme { IID, OrthoChi, HadamardRademacher };

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

struct FrequencyMatrix {
    Eigen::MatrixXd omegas;  // d x m, columns are frequencies
    Scheme scheme = Scheme::IID;
    int block_size = 1;
    WeightFunction weight;
    std::uint64_t seed = 0;

    int dim() const { return static_cast<int>(omegas.rows()); }
    int count() const { return static_cast<int>(omegas.cols()); }
};

// i.i.d. columns from Lambda = w^2 * spectral density; Flat weights draw from
// N(0, Sigma^{-1}/s^2) exactly.
FrequencyMatrix sample_iid(const KernelSpec& spec, const WeightFunction& w, int m,
                           std::uint64_t seed);

// Block-i.i.d. structured frequencies with d x d blocks (m a multiple of d,
// flat weight). OrthoChi columns are exactly marginally N(0, Sigma^{-1}/s^2);
// HadamardRademacher is an approximate O(d log d) construction (d a power of 2).
FrequencyMatrix sample_structured(const KernelSpec& spec, int m, Scheme scheme,
                                  std::uint64_t seed);

// Unnormalized fast Walsh-Hadamard transform, in place; n a power of two.
void fwht(double* v, int n);
void fwht(Eigen::VectorXd& v);

enum class GrowthClass { Finite, Infinite };

// Log-log tail slope of |<phi_omega, pi_0>| * max(1, r, r^2) on a log radius
// grid up to 1e6, and its classification (slope above 0.1 reads as infinite).
double legacy_growth_slope(const KernelSpec& spec, const std::function<double(double)>& w);
GrowthClass check_legacy_condition(const KernelSpec& spec,
                                   const std::function<double(double)>& w);
GrowthClass check_legacy_condition(const KernelSpec& spec, const WeightFunction& w);

// Binary container: header {magic "MXRP", version u32, d u32, m u32, scheme u8,
// seed u64}, then column-major f64 payload. Little-endian.
void save_frequency_matrix(const FrequencyMatrix& fm, const std::string& path);
FrequencyMatrix load_frequency_matrix(const std::string& path);
void export_frequency_csv(const FrequencyMatrix& fm, const std::string& path);

} // namespace mixrip
