#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "mixrip/kernels.hpp"
#include "mixrip/mixtures.hpp"
#include "mixrip/rng.hpp"
#include "mixrip/sketch.hpp"

namespace mixrip {

// Per-frequency weight of the bound chain: psi(omega) = g^2/(w^2 ||pi_0||^2).
double psi_weight(const KernelSpec& spec, const WeightFunction& w,
                  const Eigen::VectorXd& omega);

enum class ProcessKind { D, MM, MD, DD };

// The four trigonometric kernels of the empirical processes. Slots follow the
// parametrization: d takes x in Theta_d, mm takes y in Theta_mm, md takes
// (x, y), dd takes (x1, x2, y).
double f_d(const KernelSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& omega);
double f_mm(const Eigen::VectorXd& y, const Eigen::VectorXd& omega);
double f_md(const KernelSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
            const Eigen::VectorXd& omega);
double f_dd(const KernelSpec& spec, const Eigen::VectorXd& x1, const Eigen::VectorXd& x2,
            const Eigen::VectorXd& y, const Eigen::VectorXd& omega);

// Empirical means (1/m) sum_j psi(omega_j) f_ell(.|omega_j) over a fixed
// frequency matrix, with the per-frequency psi values cached.
class PsiEvaluator {
public:
    PsiEvaluator(const SketchOperator& op);

    const KernelSpec& spec() const { return spec_; }
    const Eigen::MatrixXd& omegas() const { return omegas_; }
    const Eigen::VectorXd& psi_values() const { return psi_; }
    int count() const { return static_cast<int>(omegas_.cols()); }

    double psi_m() const;  // (1/m) sum psi
    double psi0() const;   // (1/m) sum psi * (||w||* + ||w||*^2 + ||w||*^3)

    double big_psi_d(const Eigen::VectorXd& x) const;
    double big_psi_mm(const Eigen::VectorXd& y) const;
    double big_psi_md(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
    double big_psi_dd(const Eigen::VectorXd& x1, const Eigen::VectorXd& x2,
                      const Eigen::VectorXd& y) const;

    // Squared sketch norm of the normalized dipole with parameters (alpha, x),
    // x the node difference.
    double dipole_norm_sq(double alpha, const Eigen::VectorXd& x) const;

private:
    KernelSpec spec_;
    Eigen::MatrixXd omegas_;
    Eigen::VectorXd psi_;
};

struct DomainSpec {
    ProcessKind which;
    double eps;
    double diameter;  // diameter of Theta under the a-norm
    int dim;
};

struct SupResult {
    double value = 0.0;
    std::vector<Eigen::VectorXd> argmax;  // domain point(s) achieving the best value
    int seeds_used = 0;
};

// Stochastic supremum search: Halton space-filling seeds plus local
// refinement of the best candidates. Maximizes |1 - Psi_d| on Theta_d and
// |Psi_ell| elsewhere; MD/DD search the product of Theta_d factors with the
// cross-separation constraints (all cross node distances at least eps).
SupResult sup_search(const PsiEvaluator& ev, const DomainSpec& domain,
                     int n_seeds = 4096, int n_refine = 32);

struct RipReport {
    double psi_m = 0.0;
    double delta_m = 0.0;
    double delta_dhat = 0.0;
    double mu_mm = 0.0;
    double mu_md = 0.0;
    double mu_dd = 0.0;
    double c = 0.0;
    int k = 0;
    double psi0 = 0.0;
    double c_kappa = 0.0;
    bool bound_defined = false;
    double bound_delta_sk = 0.0;  // main bound via the three reduced coherences
    double bound_prop2 = 0.0;     // intermediate bound with delta(D) and mu(D^2)
    int sup_seeds = 0;

    nlohmann::json to_json() const;
};

// Assemble the deterministic bound from the searched quantities; c = (2k-1)*mu.
RipReport assemble_bound(double psi_m, double delta_dhat, double mu_mm, double mu_md,
                         double mu_dd, double mu, int k);

// Full pipeline: run the four sup searches and assemble. mu is the coherence
// used for c (searched estimate or certificate).
RipReport compute_rip_report(const PsiEvaluator& ev, const DomainSpec& base_domain,
                             double mu, int k, int n_seeds = 4096, int n_refine = 32);

// Lipschitz constant 6 * Psi0 * C_kappa and the four pseudometrics.
double lipschitz_bound(const PsiEvaluator& ev, const SmoothnessProfile& profile);
double metric_d(const KernelSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& xp);
double metric_mm(const KernelSpec& spec, const Eigen::VectorXd& y, const Eigen::VectorXd& yp);
double metric_md(const KernelSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                 const Eigen::VectorXd& xp, const Eigen::VectorXd& yp);
double metric_dd(const KernelSpec& spec, const Eigen::VectorXd& x1, const Eigen::VectorXd& x2,
                 const Eigen::VectorXd& y, const Eigen::VectorXd& x1p,
                 const Eigen::VectorXd& x2p, const Eigen::VectorXd& yp);

// Covering number bound (1 + 64(D+1)/tau)^(3d+2).
double covering_bound(int d, double diameter, double tau);

enum class SufficientSize { GaussianMix, DiracMix, Structured };

struct SketchSizeParams {
    int k = 1;
    int d = 1;
    double s = 1.0;
    double eps = 1.0;
    double tau = 0.2;
    double eta = 0.05;
    double diam = 1.0;  // diameter of Theta in units of the a-norm
    double mu = 1e-3;   // mutual coherence; the bound requires mu < 1/(10k)
    BaseKind base = BaseKind::Dirac;  // base family for the Structured variant
};

struct SketchSizeResult {
    bool ok = false;       // all preconditions hold
    std::string violated;  // first violated precondition, empty when ok;
                           // m and v are evaluated either way
    double m = 0.0;
    double v = 0.0;
    double bigC = 0.0;
    double c = 0.0;             // worst admissible 2k-coherence
    double eps_threshold = 0.0;
    int iterations = 0;         // fixed-point iterations (Dirac variant)
};

SketchSizeResult sketch_size(SufficientSize cor, const SketchSizeParams& p);

// Max of |  ||A nu||^2 - 1 | over sampled normalized secants.
double empirical_delta_sk(const SketchOperator& op, int k, int n_secants, double eps,
                          double box, Rng& rng);

} // namespace mixrip
