#include "mixrip/mixtures.hpp"

#include <cmath>
#include <stdexcept>

namespace mixrip {

SignedMixture SignedMixture::difference(const Mixture& p, const Mixture& q) {
    SignedMixture out;
    out.centers = p.centers;
    out.weights = p.weights;
    for (std::size_t j = 0; j < q.centers.size(); ++j) {
        out.centers.push_back(q.centers[j]);
        out.weights.push_back(-q.weights[j]);
    }
    return out;
}

SignedMixture SignedMixture::scaled(double c) const {
    SignedMixture out = *this;
    for (auto& w : out.weights) w *= c;
    return out;
}

SignedMixture Dipole::as_signed_mixture() const {
    SignedMixture out;
    const double s = sign * scale;
    out.centers.push_back(theta1);
    out.weights.push_back(s);
    if (alpha != 0.0) {
        out.centers.push_back(theta2);
        out.weights.push_back(-s * alpha);
    }
    return out;
}

double mmd_inner(const SignedMixture& a, const SignedMixture& b, const KernelSpec& spec) {
    const double b0 = spec.base_norm_sq();
    double acc = 0.0;
    for (std::size_t i = 0; i < a.centers.size(); ++i) {
        if (a.centers[i].size() != spec.dim())
            throw std::invalid_argument("mmd_inner: dimension mismatch");
        for (std::size_t j = 0; j < b.centers.size(); ++j) {
            acc += a.weights[i] * b.weights[j] *
                   spec.normalized_kernel(a.centers[i] - b.centers[j]);
        }
    }
    return b0 * acc;
}

double mmd_norm_sq(const SignedMixture& a, const KernelSpec& spec) {
    return std::max(0.0, mmd_inner(a, a, spec));
}

double mmd_norm(const SignedMixture& a, const KernelSpec& spec) {
    return std::sqrt(mmd_norm_sq(a, spec));
}

std::optional<std::pair<int, int>> separation_violation(const Mixture& p,
                                                        const KernelSpec& spec,
                                                        double eps) {
    for (std::size_t i = 0; i < p.centers.size(); ++i)
        for (std::size_t j = i + 1; j < p.centers.size(); ++j)
            if (spec.a_norm(p.centers[i] - p.centers[j]) < 2.0 * eps)
                return std::make_pair(static_cast<int>(i), static_cast<int>(j));
    return std::nullopt;
}

static Dipole make_dipole(const Eigen::VectorXd& t1, double w1,
                          const Eigen::VectorXd& t2, double w2) {
    // w1*pi_{t1} - w2*pi_{t2} with w1,w2 >= 0, written as sign*s*(pi - alpha*pi)
    Dipole d;
    if (w1 >= w2) {
        d.theta1 = t1;
        d.theta2 = t2;
        d.scale = w1;
        d.alpha = w1 > 0.0 ? w2 / w1 : 0.0;
        d.sign = 1;
    } else {
        d.theta1 = t2;
        d.theta2 = t1;
        d.scale = w2;
        d.alpha = w1 / w2;
        d.sign = -1;
    }
    return d;
}

std::vector<Dipole> dipole_decompose(const Mixture& p, const Mixture& q,
                                     const KernelSpec& spec, double eps) {
    for (const auto* m : {&p, &q}) {
        if (auto bad = separation_violation(*m, spec, eps)) {
            throw std::invalid_argument(
                "dipole_decompose: mixture not 2-separated, offending centers " +
                std::to_string(bad->first) + " and " + std::to_string(bad->second));
        }
    }
    std::vector<int> partner_q(q.centers.size(), -1);
    std::vector<Dipole> out;
    std::vector<bool> q_used(q.centers.size(), false);
    for (std::size_t i = 0; i < p.centers.size(); ++i) {
        int match = -1;
        for (std::size_t j = 0; j < q.centers.size(); ++j) {
            if (spec.a_norm(p.centers[i] - q.centers[j]) <= eps) {
                match = static_cast<int>(j);
                break;  // 2-separation of q makes the admissible partner unique
            }
        }
        if (match >= 0) {
            q_used[match] = true;
            out.push_back(make_dipole(p.centers[i], p.weights[i],
                                      q.centers[match], q.weights[match]));
        } else {
            Dipole d;
            d.theta1 = p.centers[i];
            d.theta2 = p.centers[i];
            d.alpha = 0.0;
            d.scale = p.weights[i];
            d.sign = 1;
            out.push_back(d);
        }
    }
    for (std::size_t j = 0; j < q.centers.size(); ++j) {
        if (q_used[j]) continue;
        Dipole d;
        d.theta1 = q.centers[j];
        d.theta2 = q.centers[j];
        d.alpha = 0.0;
        d.scale = q.weights[j];
        d.sign = -1;
        out.push_back(d);
    }
    std::vector<Dipole> nonzero;
    for (const auto& d : out) {
        if (mmd_norm(d.as_signed_mixture(), spec) >= 1e-14) nonzero.push_back(d);
    }
    return nonzero;
}

Mixture sample_mixture(int k, const KernelSpec& spec, double eps, double box, Rng& rng) {
    if (k < 1) throw std::invalid_argument("sample_mixture: k must be >= 1");
    if (box <= 0.0) throw std::invalid_argument("sample_mixture: box must be positive");
    const int d = spec.dim();
    Mixture m;
    int budget = 10000;
    while (static_cast<int>(m.centers.size()) < k) {
        if (--budget < 0)
            throw std::runtime_error(
                "sample_mixture: dart throwing exhausted its budget; box too small for k and eps");
        Eigen::VectorXd c(d);
        for (int i = 0; i < d; ++i) c[i] = rng.uniform(-box, box);
        bool ok = true;
        for (const auto& prev : m.centers) {
            if (spec.a_norm(c - prev) < 2.0 * eps) {
                ok = false;
                break;
            }
        }
        if (ok) m.centers.push_back(c);
    }
    m.weights.assign(k, 0.0);
    rng.dirichlet_uniform(m.weights);
    return m;
}

SignedMixture sample_secant(int k, const KernelSpec& spec, double eps, double box, Rng& rng) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        const Mixture p = sample_mixture(k, spec, eps, box, rng);
        const Mixture q = sample_mixture(k, spec, eps, box, rng);
        SignedMixture diff = SignedMixture::difference(p, q);
        const double n = mmd_norm(diff, spec);
        if (n > 1e-8) return diff.scaled(1.0 / n);
    }
    throw std::runtime_error("sample_secant: could not draw a non-degenerate secant");
}

nlohmann::json mixture_to_json(const Mixture& p) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < p.centers.size(); ++i) {
        nlohmann::json item;
        item["center"] = std::vector<double>(p.centers[i].data(),
                                             p.centers[i].data() + p.centers[i].size());
        item["weight"] = p.weights[i];
        arr.push_back(item);
    }
    return arr;
}

Mixture mixture_from_json(const nlohmann::json& j) {
    Mixture m;
    for (const auto& item : j) {
        const auto c = item.at("center").get<std::vector<double>>();
        Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(c.data(), c.size());
        m.centers.push_back(v);
        m.weights.push_back(item.at("weight").get<double>());
    }
    return m;
}

} // namespace mixrip
