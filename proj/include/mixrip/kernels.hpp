#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "json.hpp"

namespace mixrip {

enum class BaseKind { Dirac, Gaussian };

std::string base_kind_name(BaseKind k);
BaseKind base_kind_from_name(const std::string& name);

// Gaussian shift-invariant kernel with scale s, base distribution kind and
// optional covariance Sigma (Gaussian base only; Dirac base uses the identity).
class KernelSpec {
public:
    KernelSpec(BaseKind kind, double s, int d);
    KernelSpec(BaseKind kind, double s, const Eigen::MatrixXd& sigma);

    BaseKind base_kind() const { return kind_; }
    double scale() const { return s_; }
    int dim() const { return d_; }
    bool identity_sigma() const { return identity_; }
    const Eigen::MatrixXd& sigma() const { return sigma_; }

    // Scale of the radial profile of the normalized kernel:
    // sqrt(2)*s for a Dirac base, sqrt(2*(2+s^2)) for a Gaussian base.
    double sigma_profile() const;

    // Norm on center space (Mahalanobis for a Gaussian base) and its dual.
    double a_norm(const Eigen::VectorXd& x) const;
    double a_dual_norm(const Eigen::VectorXd& omega) const;
    // Direction with unit a-norm from an arbitrary nonzero seed vector.
    Eigen::VectorXd a_unit(const Eigen::VectorXd& v) const;
    // Map a standard Gaussian draw z to a frequency with law N(0, Sigma^{-1}/s^2).
    Eigen::VectorXd color_frequency(const Eigen::VectorXd& z) const;

    // Normalized kernel (1 at lag zero) and its radial profile exp(-r^2/sigma^2).
    double normalized_kernel(const Eigen::VectorXd& x) const;
    double radial_kernel(double r) const;

    // Squared kernel norm of the base distribution's mean embedding.
    double base_norm_sq() const;

    // Modulus of the characteristic function of the base distribution.
    double char_fn(const Eigen::VectorXd& omega) const;

    nlohmann::json to_json() const;
    static KernelSpec from_json(const nlohmann::json& j);

private:
    void init_sigma();
    BaseKind kind_;
    double s_;
    int d_;
    bool identity_;
    Eigen::MatrixXd sigma_;
    Eigen::MatrixXd chol_l_;      // Sigma = L L^T
    Eigen::MatrixXd chol_l_inv_;  // L^{-1}
};

struct SmoothnessProfile {
    double sigma;
    double R;
    double c_kappa;
};

// alpha(r) = r / sqrt(1 - exp(-r^2/sigma^2)), extended by alpha(0+) = sigma,
// and its derivative in r.
double alpha_profile_value(double sigma, double r);
double alpha_profile_derivative(double sigma, double r);
// Pair (alpha, alpha') for the spec's radial profile.
void alpha_profile(const KernelSpec& spec, double r, double* alpha, double* alpha_prime);

// C_kappa = sup_{0<r<=R} max(1, alpha^2, alpha'^2) by dense log grid plus
// golden-section refinement around the grid argmax.
SmoothnessProfile compute_c_kappa(const KernelSpec& spec, double R);

struct CoherenceResult {
    double estimate;          // best value found by random-restart search (lower bound)
    double certificate;       // 12/(16(2k-1)), valid above the separation threshold
    bool certificate_valid;
    double threshold;         // minimal epsilon for the certificate
};

// Mutual coherence of 1-separated normalized dipoles under the kernel inner
// product; numeric lower-bound search plus the analytic certificate.
CoherenceResult mutual_coherence(const KernelSpec& spec, double epsilon, int k,
                                 std::uint64_t seed = 12345);

// Kernel inner product of two dipoles iota = s(pi_{t1} - alpha pi_{t2}),
// both normalized; positions are scalar offsets along a unit a-norm direction.
double dipole_inner_1d(const KernelSpec& spec, double alpha1, double t1a, double t1b,
                       double alpha2, double t2a, double t2b);

} // namespace mixrip
