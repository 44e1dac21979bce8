#include "mixrip/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "mixrip/rng.hpp"
#include "mixrip/util.hpp"

namespace mixrip {

std::string base_kind_name(BaseKind k) {
    return k == BaseKind::Dirac ? "dirac" : "gaussian";
}

BaseKind base_kind_from_name(const std::string& name) {
    if (name == "dirac") return BaseKind::Dirac;
    if (name == "gaussian") return BaseKind::Gaussian;
    throw std::invalid_argument("unknown base kind: " + name);
}

KernelSpec::KernelSpec(BaseKind kind, double s, int d)
    : kind_(kind), s_(s), d_(d), identity_(true) {
    if (s <= 0.0) throw std::invalid_argument("scale must be positive");
    if (d <= 0) throw std::invalid_argument("dimension must be positive");
    sigma_ = Eigen::MatrixXd::Identity(d, d);
    init_sigma();
}

KernelSpec::KernelSpec(BaseKind kind, double s, const Eigen::MatrixXd& sigma)
    : kind_(kind), s_(s), d_(static_cast<int>(sigma.rows())), identity_(false), sigma_(sigma) {
    if (s <= 0.0) throw std::invalid_argument("scale must be positive");
    if (sigma.rows() != sigma.cols() || sigma.rows() < 1)
        throw std::invalid_argument("covariance must be square");
    if (!sigma.isApprox(sigma.transpose(), 1e-12))
        throw std::invalid_argument("covariance must be symmetric");
    identity_ = sigma.isIdentity(1e-14);
    init_sigma();
}

void KernelSpec::init_sigma() {
    Eigen::LLT<Eigen::MatrixXd> llt(sigma_);
    if (llt.info() != Eigen::Success)
        throw std::invalid_argument("covariance must be positive definite");
    chol_l_ = llt.matrixL();
    chol_l_inv_ = chol_l_.triangularView<Eigen::Lower>().solve(
        Eigen::MatrixXd::Identity(d_, d_));
}

double KernelSpec::sigma_profile() const {
    if (kind_ == BaseKind::Dirac) return std::sqrt(2.0) * s_;
    return std::sqrt(2.0 * (2.0 + s_ * s_));
}

double KernelSpec::a_norm(const Eigen::VectorXd& x) const {
    if (x.size() != d_) throw std::invalid_argument("a_norm: dimension mismatch");
    if (identity_) return x.norm();
    return (chol_l_inv_ * x).norm();
}

double KernelSpec::a_dual_norm(const Eigen::VectorXd& omega) const {
    if (omega.size() != d_) throw std::invalid_argument("a_dual_norm: dimension mismatch");
    if (identity_) return omega.norm();
    return (chol_l_.transpose() * omega).norm();
}

Eigen::VectorXd KernelSpec::a_unit(const Eigen::VectorXd& v) const {
    if (v.size() != d_) throw std::invalid_argument("a_unit: dimension mismatch");
    const double n = v.norm();
    if (!(n > 0.0)) throw std::invalid_argument("a_unit: zero seed vector");
    if (identity_) return v / n;
    return chol_l_ * (v / n);
}

Eigen::VectorXd KernelSpec::color_frequency(const Eigen::VectorXd& z) const {
    if (z.size() != d_) throw std::invalid_argument("color_frequency: dimension mismatch");
    if (identity_) return z / s_;
    return chol_l_inv_.transpose() * (z / s_);
}

double KernelSpec::normalized_kernel(const Eigen::VectorXd& x) const {
    return radial_kernel(a_norm(x));
}

double KernelSpec::radial_kernel(double r) const {
    const double sig = sigma_profile();
    return std::exp(-(r * r) / (sig * sig));
}

double KernelSpec::base_norm_sq() const {
    if (kind_ == BaseKind::Dirac) return 1.0;
    return std::pow(1.0 + 2.0 / (s_ * s_), -0.5 * d_);
}

double KernelSpec::char_fn(const Eigen::VectorXd& omega) const {
    if (kind_ == BaseKind::Dirac) return 1.0;
    const double q = a_dual_norm(omega);
    return std::exp(-0.5 * q * q);
}

nlohmann::json KernelSpec::to_json() const {
    nlohmann::json j;
    j["base_kind"] = base_kind_name(kind_);
    j["s"] = s_;
    j["d"] = d_;
    if (!identity_) {
        nlohmann::json rows = nlohmann::json::array();
        for (int i = 0; i < d_; ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (int k = 0; k < d_; ++k) row.push_back(sigma_(i, k));
            rows.push_back(row);
        }
        j["sigma_matrix"] = rows;
    }
    return j;
}

KernelSpec KernelSpec::from_json(const nlohmann::json& j) {
    const BaseKind kind = base_kind_from_name(j.at("base_kind").get<std::string>());
    const double s = j.at("s").get<double>();
    const int d = j.at("d").get<int>();
    if (j.contains("sigma_matrix")) {
        Eigen::MatrixXd sigma(d, d);
        const auto& rows = j.at("sigma_matrix");
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k) sigma(i, k) = rows.at(i).at(k).get<double>();
        return KernelSpec(kind, s, sigma);
    }
    return KernelSpec(kind, s, d);
}

double alpha_profile_value(double sigma, double r) {
    if (r < 0.0) throw std::invalid_argument("alpha: r must be nonnegative");
    if (r == 0.0) return sigma;
    const double t = r / sigma;
    const double one_minus = -std::expm1(-t * t);
    return r / std::sqrt(one_minus);
}

double alpha_profile_derivative(double sigma, double r) {
    if (r < 0.0) throw std::invalid_argument("alpha': r must be nonnegative");
    const double t = r / sigma;
    if (t < 1e-2) {
        // series around t=0: numerator 1 - e^{-t^2}(1+t^2) = t^4/2 - t^6/3 + t^8/8
        const double t2 = t * t;
        const double num = t2 * t2 * (0.5 - t2 / 3.0 + t2 * t2 / 8.0);
        const double den = std::pow(-std::expm1(-t2), 1.5);
        return t == 0.0 ? 0.0 : num / den;
    }
    const double e = std::exp(-t * t);
    const double num = 1.0 - e * (1.0 + t * t);
    const double den = std::pow(1.0 - e, 1.5);
    return num / den;
}

void alpha_profile(const KernelSpec& spec, double r, double* alpha, double* alpha_prime) {
    if (r <= 0.0) throw std::invalid_argument("alpha_profile: r must be positive");
    const double sig = spec.sigma_profile();
    if (alpha) *alpha = alpha_profile_value(sig, r);
    if (alpha_prime) *alpha_prime = alpha_profile_derivative(sig, r);
}

SmoothnessProfile compute_c_kappa(const KernelSpec& spec, double R) {
    if (R <= 0.0) throw std::invalid_argument("compute_c_kappa: R must be positive");
    const double sig = spec.sigma_profile();
    auto value = [&](double r) {
        const double a = alpha_profile_value(sig, r);
        const double ap = alpha_profile_derivative(sig, r);
        return std::max({1.0, a * a, ap * ap});
    };

    const int n = 10000;
    const double lo = 1e-6 * sig;
    const double log_lo = std::log(std::min(lo, R));
    const double log_hi = std::log(R);
    double best = value(R);
    int best_i = n - 1;
    for (int i = 0; i < n; ++i) {
        const double r = std::exp(log_lo + (log_hi - log_lo) * i / (n - 1.0));
        const double v = value(r);
        if (v > best) {
            best = v;
            best_i = i;
        }
    }
    const double step = (log_hi - log_lo) / (n - 1.0);
    const double la = std::max(log_lo, log_lo + (best_i - 1) * step);
    const double lb = std::min(log_hi, log_lo + (best_i + 1) * step);
    const double refined = golden_section_max(
        [&](double l) { return value(std::exp(l)); }, la, lb, 1e-12);
    best = std::max(best, refined);

    SmoothnessProfile out;
    out.sigma = sig;
    out.R = R;
    out.c_kappa = std::max(1.0, best);
    return out;
}

double dipole_inner_1d(const KernelSpec& spec, double alpha1, double t1a, double t1b,
                       double alpha2, double t2a, double t2b) {
    auto kbar = [&](double r) { return spec.radial_kernel(std::abs(r)); };
    const double sig = spec.sigma_profile();
    // 1 - kbar(r) via expm1, stable for tiny gaps
    auto one_minus_kbar = [&](double r) { return -std::expm1(-r * r / (sig * sig)); };
    const double a = kbar(t1a - t2a);
    const double b = kbar(t1a - t2b);
    const double c = kbar(t1b - t2a);
    const double d = kbar(t1b - t2b);
    const double n1 =
        (1.0 - alpha1) * (1.0 - alpha1) + 2.0 * alpha1 * one_minus_kbar(t1a - t1b);
    const double n2 =
        (1.0 - alpha2) * (1.0 - alpha2) + 2.0 * alpha2 * one_minus_kbar(t2a - t2b);
    if (!(n1 > 0.0) || !(n2 > 0.0))
        throw std::invalid_argument("dipole_inner_1d: degenerate dipole");
    const double num = a - alpha2 * b - alpha1 * c + alpha1 * alpha2 * d;
    return num / (std::sqrt(n1) * std::sqrt(n2));
}

CoherenceResult mutual_coherence(const KernelSpec& spec, double epsilon, int k,
                                 std::uint64_t seed) {
    if (epsilon <= 0.0) throw std::invalid_argument("mutual_coherence: epsilon must be positive");
    if (k < 1) throw std::invalid_argument("mutual_coherence: k must be >= 1");

    CoherenceResult res;
    res.certificate = 12.0 / (16.0 * (2.0 * k - 1.0));
    const double base_scale = (spec.base_kind() == BaseKind::Dirac)
                                  ? spec.scale()
                                  : std::sqrt(spec.scale() * spec.scale() + 2.0);
    res.threshold = base_scale * 4.0 * std::sqrt(std::log(std::exp(1.0) * k));
    res.certificate_valid = (epsilon >= res.threshold);

    const double sig = spec.sigma_profile();
    // Nodes on a line with unit a-norm direction: dipole 1 occupies {0, s1*g1},
    // dipole 2 sits to the right at gap g2 >= eps, with its second node at s2*g3.
    auto objective = [&](double alpha1, double alpha2, double g1, double g2, double g3,
                         double s1, double s2) {
        const double t1a = 0.0;
        const double t1b = s1 * g1;
        const double t2a = std::max(t1a, t1b) + g2;
        const double t2b = t2a + s2 * g3;
        // 1-separation: all cross distances at least eps
        const double sep = std::min(
            std::min(std::abs(t2a - t1a), std::abs(t2a - t1b)),
            std::min(std::abs(t2b - t1a), std::abs(t2b - t1b)));
        if (sep < epsilon) return 0.0;
        return std::abs(dipole_inner_1d(spec, alpha1, t1a, t1b, alpha2, t2a, t2b));
    };

    double best = 0.0;
    Rng rng(seed);
    const int restarts = 64;
    for (int r = 0; r < restarts; ++r) {
        const double s1 = rng.uniform() < 0.5 ? -1.0 : 1.0;
        const double s2 = rng.uniform() < 0.5 ? -1.0 : 1.0;
        std::vector<double> x = {rng.uniform(), rng.uniform(), rng.uniform(),
                                 rng.uniform(), rng.uniform()};
        auto neg = [&](const std::vector<double>& p) {
            auto clamp01 = [](double v) { return std::min(1.0, std::max(0.0, v)); };
            const double a1 = clamp01(p[0]);
            const double a2 = clamp01(p[1]);
            const double g1 = std::max(1e-9, clamp01(p[2])) * epsilon;
            const double g2 = epsilon + clamp01(p[3]) * 5.0 * sig;
            const double g3 = std::max(1e-9, clamp01(p[4])) * epsilon;
            return -objective(a1, a2, g1, g2, g3, s1, s2);
        };
        const double v = -nelder_mead_min(neg, x, 0.15, 400);
        if (v > best) best = v;
    }
    res.estimate = best;
    return res;
}

} // namespace mixrip
