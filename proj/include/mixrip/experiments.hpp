#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mixrip/frequencies.hpp"
#include "mixrip/kernels.hpp"
#include "mixrip/ripbounds.hpp"

namespace mixrip {

// ---- sketch variance of the alternating mixture pair ----

struct VarianceConfig {
    std::uint64_t seed = 1;
    int d = 2;
    double s = 1.0;
    int k_min = 1;
    int k_max = 20;
    int m = 50;
    int draws = 20000;
    int classical_draws = 200000;
};

struct VarianceRow {
    int k;
    double eps;
    double mv_mc;         // m * MC variance of ||A nu_k||^2
    double mv_mc_se;
    double mv_closed;     // m * variance from the tensor closed form
    double mv_classical;  // m * MC variance of ||A x||^2, Gaussian iid A
    double mv_classical_se;
    double lower_bound;   // k/7 - 1
};

struct VarianceResult {
    std::vector<VarianceRow> rows;
    bool pass_classical = true;  // mv_classical within 0.05 of 2 at every k
    bool pass_closed = true;     // |mv_mc - mv_closed| <= 3 SE at every k
    bool pass_lower = true;      // mv_mc >= k/7 - 1 at every k
};

VarianceResult variance_experiment(const VarianceConfig& cfg);

// Closed-form m * Variance of ||A nu_k||^2 for the alternating construction
// with node gap eps (Dirac base, flat weight, scale s).
double variance_closed_form(int k, double eps, double s, int* exp_overflow = nullptr);

// ---- tail of psi(omega) for the Gaussian base ----

struct PsiTailConfig {
    std::uint64_t seed = 1;
    double s = 3.0;
    std::vector<int> dims = {5, 100};
    long long n = 1000000;
    int grid_n = 26;
    double eps_max = 5.0;
};

struct TailCurve {
    int d = 0;
    double b_psi = 0.0;
    double v_psi = 0.0;
    double mean_psi = 0.0;
    double mean_se = 0.0;
    std::vector<double> eps;
    std::vector<double> empirical;
    std::vector<double> hoeffding;
    std::vector<double> bernstein;
    std::vector<double> conjecture;  // charted only, never asserted
    bool pass_mean = true;
    bool pass_bernstein = true;
};

std::vector<TailCurve> psi_tail_experiment(const PsiTailConfig& cfg);

// ---- second moment of psi_mm under three weight functions ----

struct PsiMmConfig {
    std::uint64_t seed = 1;
    int d = 2;
    double s = 1.0;
    double eps = 1.0;
    double y_norm_max = 10.0;
    int n_y = 10;
    long long n_samples = 200000;
};

struct PsiMmRow {
    std::string weight;
    double y_norm = 0.0;
    double estimate = 0.0;
    double se = 0.0;
    bool pass = false;  // estimate + 3 SE >= 1/4
};

std::vector<PsiMmRow> psi_mm_moment_experiment(const PsiMmConfig& cfg);

// ---- concentration of the empirical third frequency moment ----

struct OmegaCubedConfig {
    std::uint64_t seed = 1;
    int d = 2;
    double s = 1.0;
    int m = 64;
    int replicates = 10000;
    std::vector<double> taus = {0.25, 0.5, 1.0, 1.5, 2.0};
};

struct OmegaCubedRow {
    double tau = 0.0;
    double threshold = 0.0;
    double empirical = 0.0;
    double bound = 0.0;
    double se = 0.0;       // binomial SE at the bound value
    double mean_moment = 0.0;
    bool pass = false;     // empirical <= bound + 3 SE
};

std::vector<OmegaCubedRow> omega_cubed_tail_experiment(const OmegaCubedConfig& cfg);

// ---- pointwise verification of the auxiliary inequalities ----

struct InequalityEntry {
    std::string name;
    long long points = 0;
    long long violations = 0;
    double worst_margin = 0.0;       // max of lhs - rhs over the grid (<= 0 on pass)
    std::vector<double> witness;     // point achieving worst_margin
    bool audit_pass = true;          // extended-precision recheck of 100 random points
    bool pass() const { return violations == 0 && audit_pass; }
};

struct InequalityLedger {
    std::vector<InequalityEntry> entries;
    bool all_pass() const;
};

InequalityLedger inequality_suite(std::uint64_t seed = 7);

// ---- RIP exceedance and deterministic domination over operator draws ----

struct RipProbConfig {
    std::uint64_t seed = 1;
    int d = 2;
    int k = 2;
    double s = 1.0;
    double eps = 10.0;
    double tau = 0.5;
    double box = 40.0;
    std::vector<int> ms = {100, 1000, 10000};
    std::vector<Scheme> schemes = {Scheme::IID, Scheme::OrthoChi};
    int draws = 20;
    int n_secants = 100;
    int sup_seeds = 512;
    int sup_refine = 16;
};

struct RipProbRow {
    std::string scheme;
    int m = 0;
    double threshold = 0.0;       // (4c+tau)/(1-c)
    double frac_bound_exceed = 0.0;
    double frac_emp_exceed = 0.0;
    int dominated = 0;            // draws where empirical <= deterministic bound
    int defined = 0;              // draws with c < 1
    int draws = 0;
};

std::vector<RipProbRow> rip_probability_experiment(const RipProbConfig& cfg);

// ---- legacy finiteness condition dichotomy ----

struct LegacyRow {
    std::string base;
    std::string weight;
    double slope = 0.0;
    std::string classification;  // "finite" or "infinite"
};

std::vector<LegacyRow> legacy_lower_bound_experiment(double s = 1.0, int d = 2);

} // namespace mixrip
