#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mixrip/kernels.hpp"
#include "mixrip/rng.hpp"

namespace mixrip {

// Probability mixture of translated base distributions.
struct Mixture {
    std::vector<Eigen::VectorXd> centers;
    std::vector<double> weights;
};

// Linear combination with arbitrary signed weights; secants have weight sum 0.
struct SignedMixture {
    std::vector<Eigen::VectorXd> centers;
    std::vector<double> weights;

    static SignedMixture difference(const Mixture& p, const Mixture& q);
    SignedMixture scaled(double c) const;
};

// sign * scale * (pi_{theta1} - alpha * pi_{theta2}), alpha in [0,1].
// alpha = 0 is a monopole (theta2 ignored), alpha = 1 a balanced dipole.
struct Dipole {
    Eigen::VectorXd theta1;
    Eigen::VectorXd theta2;
    double alpha = 0.0;
    double scale = 1.0;
    int sign = 1;

    SignedMixture as_signed_mixture() const;
};

double mmd_inner(const SignedMixture& a, const SignedMixture& b, const KernelSpec& spec);
double mmd_norm_sq(const SignedMixture& a, const KernelSpec& spec);
double mmd_norm(const SignedMixture& a, const KernelSpec& spec);

// Indices of the closest offending pair if the mixture is not 2-separated.
std::optional<std::pair<int, int>> separation_violation(const Mixture& p,
                                                        const KernelSpec& spec,
                                                        double eps);

// Decompose p - q into at most 2k nonzero pairwise 1-separated dipoles.
// Throws std::invalid_argument naming the offending pair if an input is not
// 2-separated.
std::vector<Dipole> dipole_decompose(const Mixture& p, const Mixture& q,
                                     const KernelSpec& spec, double eps);

// Draw a 2-separated k-mixture with centers in [-box, box]^d (dart throwing
// with 2*eps exclusion, retry budget 1e4) and Dirichlet(1) weights.
Mixture sample_mixture(int k, const KernelSpec& spec, double eps, double box, Rng& rng);

// Normalized difference of two independent 2-separated k-mixtures.
SignedMixture sample_secant(int k, const KernelSpec& spec, double eps, double box, Rng& rng);

nlohmann::json mixture_to_json(const Mixture& p);
Mixture mixture_from_json(const nlohmann::json& j);

} // namespace mixrip
