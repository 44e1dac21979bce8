#include "mixrip/ripbounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mixrip/util.hpp"

namespace mixrip {

double psi_weight(const KernelSpec& spec, const WeightFunction& w,
                  const Eigen::VectorXd& omega) {
    const double g = spec.char_fn(omega);
    const double wv = w(omega.norm());
    return g * g / (wv * wv * spec.base_norm_sq());
}

double f_d(const KernelSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& omega) {
    const double denom = 1.0 - spec.normalized_kernel(x);
    if (!(denom > 0.0)) throw std::invalid_argument("f_d: x must be nonzero");
    return (1.0 - std::cos(omega.dot(x))) / denom;
}

double f_mm(const Eigen::VectorXd& y, const Eigen::VectorXd& omega) {
    return std::cos(omega.dot(y));
}

double f_md(const KernelSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
            const Eigen::VectorXd& omega) {
    const double denom = 1.0 - spec.normalized_kernel(x);
    if (!(denom > 0.0)) throw std::invalid_argument("f_md: x must be nonzero");
    return 2.0 * std::sin(0.5 * omega.dot(x)) * std::sin(omega.dot(y + 0.5 * x)) /
           std::sqrt(2.0 * denom);
}

double f_dd(const KernelSpec& spec, const Eigen::VectorXd& x1, const Eigen::VectorXd& x2,
            const Eigen::VectorXd& y, const Eigen::VectorXd& omega) {
    const double d1 = 1.0 - spec.normalized_kernel(x1);
    const double d2 = 1.0 - spec.normalized_kernel(x2);
    if (!(d1 > 0.0) || !(d2 > 0.0))
        throw std::invalid_argument("f_dd: x1 and x2 must be nonzero");
    return 4.0 * std::sin(0.5 * omega.dot(x1)) * std::sin(0.5 * omega.dot(x2)) *
           std::cos(omega.dot(y + 0.5 * x2 - 0.5 * x1)) /
           (std::sqrt(2.0 * d1) * std::sqrt(2.0 * d2));
}

PsiEvaluator::PsiEvaluator(const SketchOperator& op)
    : spec_(op.spec()), omegas_(op.freqs().omegas) {
    const int m = static_cast<int>(omegas_.cols());
    psi_.resize(m);
    for (int j = 0; j < m; ++j)
        psi_[j] = psi_weight(spec_, op.freqs().weight, omegas_.col(j));
}

double PsiEvaluator::psi_m() const {
    return count() > 0 ? psi_.mean() : 0.0;
}

double PsiEvaluator::psi0() const {
    const int m = count();
    double acc = 0.0;
    for (int j = 0; j < m; ++j) {
        const double q = spec_.a_dual_norm(omegas_.col(j));
        acc += psi_[j] * (q + q * q + q * q * q);
    }
    return m > 0 ? acc / m : 0.0;
}

double PsiEvaluator::big_psi_d(const Eigen::VectorXd& x) const {
    const double denom = 1.0 - spec_.normalized_kernel(x);
    if (!(denom > 0.0)) throw std::invalid_argument("big_psi_d: x must be nonzero");
    const Eigen::ArrayXd t = (omegas_.transpose() * x).array();
    const double num = (psi_.array() * (1.0 - t.cos())).mean();
    return num / denom;
}

double PsiEvaluator::big_psi_mm(const Eigen::VectorXd& y) const {
    const Eigen::ArrayXd t = (omegas_.transpose() * y).array();
    return (psi_.array() * t.cos()).mean();
}

double PsiEvaluator::big_psi_md(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    const double denom = 1.0 - spec_.normalized_kernel(x);
    if (!(denom > 0.0)) throw std::invalid_argument("big_psi_md: x must be nonzero");
    const Eigen::ArrayXd t = (omegas_.transpose() * x).array();
    const Eigen::ArrayXd u = (omegas_.transpose() * (y + 0.5 * x)).array();
    const double num = (psi_.array() * 2.0 * (0.5 * t).sin() * u.sin()).mean();
    return num / std::sqrt(2.0 * denom);
}

double PsiEvaluator::big_psi_dd(const Eigen::VectorXd& x1, const Eigen::VectorXd& x2,
                                const Eigen::VectorXd& y) const {
    const double d1 = 1.0 - spec_.normalized_kernel(x1);
    const double d2 = 1.0 - spec_.normalized_kernel(x2);
    if (!(d1 > 0.0) || !(d2 > 0.0))
        throw std::invalid_argument("big_psi_dd: x1 and x2 must be nonzero");
    const Eigen::ArrayXd t1 = (omegas_.transpose() * x1).array();
    const Eigen::ArrayXd t2 = (omegas_.transpose() * x2).array();
    const Eigen::ArrayXd u = (omegas_.transpose() * (y + 0.5 * x2 - 0.5 * x1)).array();
    const double num =
        (psi_.array() * 4.0 * (0.5 * t1).sin() * (0.5 * t2).sin() * u.cos()).mean();
    return num / (std::sqrt(2.0 * d1) * std::sqrt(2.0 * d2));
}

double PsiEvaluator::dipole_norm_sq(double alpha, const Eigen::VectorXd& x) const {
    const double kb = spec_.normalized_kernel(x);
    const double denom = (1.0 - alpha) * (1.0 - alpha) + 2.0 * alpha * (1.0 - kb);
    if (!(denom > 0.0)) throw std::invalid_argument("dipole_norm_sq: degenerate dipole");
    const Eigen::ArrayXd t = (omegas_.transpose() * x).array();
    const Eigen::ArrayXd num =
        (1.0 - alpha) * (1.0 - alpha) + 2.0 * alpha * (1.0 - t.cos());
    return (psi_.array() * num).mean() / denom;
}

namespace {

struct SearchGeometry {
    std::vector<char> block_kinds;  // 'd' or 'm' per point block
    double eps;
    double diameter;
    int dim;

    int n_params() const { return static_cast<int>(block_kinds.size()) * (1 + dim); }

    // map raw parameters to domain points; radius components are clamped into
    // their admissible range
    std::vector<Eigen::VectorXd> decode(const KernelSpec& spec,
                                        const std::vector<double>& p) const {
        std::vector<Eigen::VectorXd> pts;
        int o = 0;
        for (char kind : block_kinds) {
            const double u = std::min(1.0, std::max(0.0, p[o]));
            double r;
            if (kind == 'd') {
                r = eps * (1e-6 + (1.0 - 1e-6) * u);
            } else {
                r = eps + (diameter - eps) * u;
            }
            Eigen::VectorXd v(dim);
            bool nonzero = false;
            for (int i = 0; i < dim; ++i) {
                v[i] = p[o + 1 + i];
                if (v[i] != 0.0) nonzero = true;
            }
            if (!nonzero) v[0] = 1.0;
            pts.push_back(r * spec.a_unit(v));
            o += 1 + dim;
        }
        return pts;
    }
};

} // namespace

SupResult sup_search(const PsiEvaluator& ev, const DomainSpec& domain, int n_seeds,
                     int n_refine) {
    SearchGeometry geo;
    geo.eps = domain.eps;
    geo.diameter = domain.diameter;
    geo.dim = domain.dim;
    switch (domain.which) {
        case ProcessKind::D: geo.block_kinds = {'d'}; break;
        case ProcessKind::MM: geo.block_kinds = {'m'}; break;
        case ProcessKind::MD: geo.block_kinds = {'d', 'm'}; break;
        case ProcessKind::DD: geo.block_kinds = {'d', 'd', 'm'}; break;
    }
    if (domain.which != ProcessKind::D && !(domain.diameter >= domain.eps))
        throw std::invalid_argument("sup_search: diameter must be at least eps");

    const KernelSpec& spec = ev.spec();
    // Cross-separation: every cross distance between the node sets of distinct
    // dipoles is at least eps. Points violating it score zero.
    auto separated = [&](const Eigen::VectorXd& v) {
        return spec.a_norm(v) >= domain.eps * (1.0 - 1e-12);
    };
    auto objective = [&](const std::vector<double>& p) {
        const auto pts = geo.decode(spec, p);
        switch (domain.which) {
            case ProcessKind::D: return std::abs(1.0 - ev.big_psi_d(pts[0]));
            case ProcessKind::MM: return std::abs(ev.big_psi_mm(pts[0]));
            case ProcessKind::MD: {
                const Eigen::VectorXd& x = pts[0];
                const Eigen::VectorXd& y = pts[1];
                if (!separated(y + x)) return 0.0;
                return std::abs(ev.big_psi_md(x, y));
            }
            case ProcessKind::DD: {
                const Eigen::VectorXd& x1 = pts[0];
                const Eigen::VectorXd& x2 = pts[1];
                const Eigen::VectorXd& y = pts[2];
                if (!separated(y + x2) || !separated(y - x1) ||
                    !separated(y - x1 + x2))
                    return 0.0;
                return std::abs(ev.big_psi_dd(x1, x2, y));
            }
        }
        return 0.0;
    };

    const int np = geo.n_params();
    std::vector<std::pair<double, std::vector<double>>> candidates;
    candidates.reserve(n_seeds);
    for (int i = 1; i <= n_seeds; ++i) {
        const auto h = halton_point(static_cast<std::uint64_t>(i), np);
        std::vector<double> p(np);
        int o = 0;
        for (char kind : geo.block_kinds) {
            (void)kind;
            p[o] = h[o];
            for (int c = 0; c < geo.dim; ++c) {
                const double u = std::min(1.0 - 1e-12, std::max(1e-12, h[o + 1 + c]));
                p[o + 1 + c] = norminv(u);
            }
            o += 1 + geo.dim;
        }
        candidates.emplace_back(objective(p), std::move(p));
    }
    std::partial_sort(candidates.begin(),
                      candidates.begin() + std::min<int>(n_refine, n_seeds),
                      candidates.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first; });

    SupResult res;
    res.seeds_used = n_seeds;
    auto neg = [&](const std::vector<double>& p) { return -objective(p); };
    const int top = std::min<int>(n_refine, static_cast<int>(candidates.size()));
    for (int t = 0; t < top; ++t) {
        std::vector<double> p = candidates[t].second;
        const double v = -nelder_mead_min(neg, p, 0.1, 200);
        const double best = std::max(v, candidates[t].first);
        if (best > res.value) {
            res.value = best;
            res.argmax = geo.decode(spec, p);
        }
    }
    if (res.argmax.empty() && !candidates.empty())
        res.argmax = geo.decode(spec, candidates[0].second);
    return res;
}

nlohmann::json RipReport::to_json() const {
    nlohmann::json j;
    j["psi_m"] = psi_m;
    j["delta_m"] = delta_m;
    j["delta_dhat"] = delta_dhat;
    j["mu_mm"] = mu_mm;
    j["mu_md"] = mu_md;
    j["mu_dd"] = mu_dd;
    j["c"] = c;
    j["k"] = k;
    j["psi0"] = psi0;
    j["c_kappa"] = c_kappa;
    j["bound_defined"] = bound_defined;
    j["bound_delta_sk"] = bound_delta_sk;
    j["bound_prop2"] = bound_prop2;
    j["sup_seeds"] = sup_seeds;
    return j;
}

RipReport assemble_bound(double psi_m, double delta_dhat, double mu_mm, double mu_md,
                         double mu_dd, double mu, int k) {
    RipReport r;
    r.psi_m = psi_m;
    r.delta_m = std::abs(1.0 - psi_m);
    r.delta_dhat = delta_dhat;
    r.mu_mm = mu_mm;
    r.mu_md = mu_md;
    r.mu_dd = mu_dd;
    r.k = k;
    r.c = (2.0 * k - 1.0) * mu;
    if (r.c >= 1.0) {
        r.bound_defined = false;
        return r;
    }
    const double mu_max = std::max({mu_mm, mu_md, mu_dd});
    const double delta_d = std::max(r.delta_m, delta_dhat);
    r.bound_defined = true;
    r.bound_delta_sk = (r.c + delta_d + (6.0 * k - 3.0) * mu_max) / (1.0 - r.c);
    r.bound_prop2 = (r.c + delta_d + (2.0 * k - 1.0) * 3.0 * mu_max) / (1.0 - r.c);
    return r;
}

RipReport compute_rip_report(const PsiEvaluator& ev, const DomainSpec& base_domain,
                             double mu, int k, int n_seeds, int n_refine) {
    DomainSpec dom = base_domain;
    dom.which = ProcessKind::D;
    const SupResult rd = sup_search(ev, dom, n_seeds, n_refine);
    dom.which = ProcessKind::MM;
    const SupResult rmm = sup_search(ev, dom, n_seeds, n_refine);
    dom.which = ProcessKind::MD;
    const SupResult rmd = sup_search(ev, dom, n_seeds, n_refine);
    dom.which = ProcessKind::DD;
    const SupResult rdd = sup_search(ev, dom, n_seeds, n_refine);

    RipReport r = assemble_bound(ev.psi_m(), rd.value, rmm.value, rmd.value, rdd.value,
                                 mu, k);
    r.psi0 = ev.psi0();
    r.sup_seeds = n_seeds;
    return r;
}

double lipschitz_bound(const PsiEvaluator& ev, const SmoothnessProfile& profile) {
    return 6.0 * ev.psi0() * profile.c_kappa;
}

double metric_d(const KernelSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& xp) {
    const double nx = spec.a_norm(x);
    const double nxp = spec.a_norm(xp);
    if (!(nx > 0.0) || !(nxp > 0.0))
        throw std::invalid_argument("metric_d: arguments must be nonzero");
    return std::abs(nx - nxp) + spec.a_norm(x / nx - xp / nxp);
}

double metric_mm(const KernelSpec& spec, const Eigen::VectorXd& y, const Eigen::VectorXd& yp) {
    return spec.a_norm(y - yp);
}

double metric_md(const KernelSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                 const Eigen::VectorXd& xp, const Eigen::VectorXd& yp) {
    return metric_d(spec, x, xp) + metric_mm(spec, y, yp);
}

double metric_dd(const KernelSpec& spec, const Eigen::VectorXd& x1, const Eigen::VectorXd& x2,
                 const Eigen::VectorXd& y, const Eigen::VectorXd& x1p,
                 const Eigen::VectorXd& x2p, const Eigen::VectorXd& yp) {
    return metric_d(spec, x1, x1p) + metric_d(spec, x2, x2p) + metric_mm(spec, y, yp);
}

double covering_bound(int d, double diameter, double tau) {
    if (tau <= 0.0) throw std::invalid_argument("covering_bound: tau must be positive");
    return std::pow(1.0 + 64.0 * (diameter + 1.0) / tau, 3.0 * d + 2.0);
}

static double vk_of_tau(int k, double c0_over_tau) {
    return 512.0 * k * k * (c0_over_tau * c0_over_tau + c0_over_tau / 3.0);
}

SketchSizeResult sketch_size(SufficientSize cor, const SketchSizeParams& p) {
    SketchSizeResult res;
    if (p.tau <= 0.0 || p.eta <= 0.0 || p.eta >= 1.0 || p.k < 1 || p.d < 1) {
        res.violated = "tau > 0, 0 < eta < 1, k >= 1, d >= 1";
        return res;
    }
    const bool dirac = (cor == SufficientSize::DiracMix) ||
                       (cor == SufficientSize::Structured && p.base == BaseKind::Dirac);
    res.c = (2.0 * p.k - 1.0) * p.mu;
    const double log5ek = std::log(5.0 * std::exp(1.0) * p.k);
    const double base_scale = dirac ? p.s : std::sqrt(2.0 + p.s * p.s);
    res.eps_threshold = base_scale * 4.0 * std::sqrt(log5ek);
    res.ok = true;
    if (!(p.mu < 1.0 / (10.0 * p.k))) {
        res.violated = "mu < 1/(10k)";
        res.ok = false;
    } else if (!(p.tau < 1.0 - 5.0 * res.c)) {
        res.violated = "tau < 1 - 5c";
        res.ok = false;
    } else if (p.eps < res.eps_threshold) {
        res.violated = dirac ? "eps >= s * 4 * sqrt(log(5 e k))"
                             : "eps >= sqrt(2 + s^2) * 4 * sqrt(log(5 e k))";
        res.ok = false;
    }

    const double s2inv = 1.0 / (p.s * p.s);
    const double structured_factor = (cor == SufficientSize::Structured)
                                         ? static_cast<double>(p.d)
                                         : 1.0;
    double gamma_prefactor = 11.0;
    if (cor == SufficientSize::Structured && dirac)
        gamma_prefactor = 10.0 + static_cast<double>(p.d);
    const double log_eta_term = std::log(gamma_prefactor / p.eta);
    const double dims_term = 3.0 * p.d + 2.0;

    if (!dirac) {
        const double c0 = 7.0 * std::sqrt(3.0) * p.eps * p.eps * s2inv *
                          std::pow(1.0 + 2.0 * s2inv, 0.5 * p.d);
        res.v = structured_factor * vk_of_tau(p.k, c0 / p.tau);
        res.bigC = 43000.0 * p.eps * p.eps * std::pow(1.0 + 2.0 * s2inv, 0.5 * p.d) *
                   p.k * (1.0 + p.diam);
        res.m = res.v * (dims_term * std::log(1.0 + res.bigC / p.tau) + log_eta_term);
        return res;
    }

    const double c0 = 7.0 * s2inv * std::max(1.0, std::sqrt(3.0) * p.eps * p.eps);
    res.v = structured_factor * vk_of_tau(p.k, c0 / p.tau);
    auto big_c = [&](double m_val) {
        const double m_eff = (cor == SufficientSize::Structured)
                                 ? m_val / static_cast<double>(p.d)
                                 : m_val;
        return 6144.0 * std::pow(1.0 + 2.0 / p.s, 3.0) *
               std::max(1.0, std::sqrt(3.0) * p.eps * p.eps) *
               (2.0 * std::pow(static_cast<double>(p.d), 1.5) +
                std::sqrt(std::max(m_eff, 0.0)) * std::pow(p.tau, 1.5)) *
               p.k * (1.0 + p.diam);
    };
    auto formula = [&](double m_val) {
        return res.v * (dims_term * std::log(1.0 + big_c(m_val) / p.tau) + log_eta_term);
    };
    double m = formula(1.0);
    int it = 0;
    for (; it < 100; ++it) {
        const double next = formula(m);
        const double rel = std::abs(next - m) / std::max(1.0, std::abs(m));
        m = next;
        if (rel < 1e-6) break;
    }
    res.iterations = it + 1;
    res.bigC = big_c(m);
    res.m = m;
    return res;
}

double empirical_delta_sk(const SketchOperator& op, int k, int n_secants, double eps,
                          double box, Rng& rng) {
    double best = 0.0;
    for (int i = 0; i < n_secants; ++i) {
        const SignedMixture nu = sample_secant(k, op.spec(), eps, box, rng);
        const double n2 = sketch_norm_sq(op.sketch_signed_mixture(nu));
        best = std::max(best, std::abs(n2 - 1.0));
    }
    return best;
}

} // namespace mixrip
