#include "mixrip/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "mixrip/mixtures.hpp"
#include "mixrip/rng.hpp"
#include "mixrip/sketch.hpp"
#include "mixrip/util.hpp"

namespace mixrip {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t s = seed ^ (salt * 0x9e3779b97f4a7c15ULL);
    return splitmix64(s);
}

struct MomentStats {
    double mean = 0.0;
    double var = 0.0;      // unbiased sample variance
    double var_se = 0.0;   // standard error of the sample variance
    double mean_se = 0.0;
};

MomentStats moment_stats(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    MomentStats st;
    if (xs.size() < 2) return st;
    double s = 0.0;
    for (double x : xs) s += x;
    st.mean = s / n;
    double m2 = 0.0, m4 = 0.0;
    for (double x : xs) {
        const double d = x - st.mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    st.var = m2 / (n - 1.0);
    const double mu4 = m4 / n;
    const double inner = mu4 - (n - 3.0) / (n - 1.0) * st.var * st.var;
    st.var_se = inner > 0.0 ? std::sqrt(inner / n) : 0.0;
    st.mean_se = std::sqrt(st.var / n);
    return st;
}

} // namespace

double variance_closed_form(int k, double eps, double s, int* exp_overflow) {
    (void)exp_overflow;
    const int n = 2 * k;
    std::vector<double> u(n);
    for (int i = 0; i < n; ++i) u[i] = (i % 2 == 0 ? 1.0 : -1.0) / k;
    // autocorrelation c(l) = sum_{i1-i2=l} u_{i1} u_{i2}
    std::vector<double> c(2 * n - 1, 0.0);
    for (int i1 = 0; i1 < n; ++i1)
        for (int i2 = 0; i2 < n; ++i2) c[i1 - i2 + (n - 1)] += u[i1] * u[i2];
    auto kval = [&](int l) {
        const double r = std::abs(l) * eps;
        return std::exp(-r * r / (2.0 * s * s));
    };
    double b = 0.0;
    for (int l = -(n - 1); l <= n - 1; ++l) b += c[l + (n - 1)] * kval(l);
    double t = 0.0;
    for (int l1 = -(n - 1); l1 <= n - 1; ++l1)
        for (int l2 = -(n - 1); l2 <= n - 1; ++l2)
            t += c[l1 + (n - 1)] * c[l2 + (n - 1)] * kval(l1 + l2);
    return (t - b * b) / (b * b);
}

VarianceResult variance_experiment(const VarianceConfig& cfg) {
    if (cfg.k_max < cfg.k_min || cfg.k_min < 1)
        throw std::invalid_argument("variance_experiment: empty or invalid k range");
    VarianceResult res;
    for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
        VarianceRow row;
        row.k = k;
        row.eps = cfg.s * 4.0 * std::sqrt(std::log(std::exp(1.0) * k));
        row.lower_bound = k / 7.0 - 1.0;
        row.mv_closed = variance_closed_form(k, row.eps, cfg.s);

        const int n = 2 * k;
        std::vector<double> u(n);
        for (int i = 0; i < n; ++i) u[i] = (i % 2 == 0 ? 1.0 : -1.0) / k;
        double b = 0.0;
        for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = 0; i2 < n; ++i2) {
                const double r = std::abs(i1 - i2) * row.eps;
                b += u[i1] * u[i2] * std::exp(-r * r / (2.0 * cfg.s * cfg.s));
            }

        // all centers lie on one line, so only the first frequency coordinate
        // enters the sketch of the alternating pair
        std::vector<double> vals(cfg.draws);
        const std::uint64_t sk = mix_seed(cfg.seed, 1000 + k);
        for (int r = 0; r < cfg.draws; ++r) {
            Rng rng = Rng::stream(sk, static_cast<std::uint64_t>(r));
            double acc = 0.0;
            for (int j = 0; j < cfg.m; ++j) {
                const double t = row.eps * rng.gauss() / cfg.s;
                const std::complex<double> rot(std::cos(t), std::sin(t));
                std::complex<double> e(1.0, 0.0), sum(0.0, 0.0);
                for (int i = 0; i < n; ++i) {
                    sum += u[i] * e;
                    e *= rot;
                }
                acc += std::norm(sum);
            }
            vals[r] = acc / (cfg.m * b);
        }
        const MomentStats mc = moment_stats(vals);
        row.mv_mc = cfg.m * mc.var;
        row.mv_mc_se = cfg.m * mc.var_se;

        std::vector<double> cls(cfg.classical_draws);
        const std::uint64_t sc = mix_seed(cfg.seed, 2000 + k);
        Rng crng(sc);
        for (int r = 0; r < cfg.classical_draws; ++r)
            cls[r] = crng.chi_squared(cfg.m) / cfg.m;
        const MomentStats cst = moment_stats(cls);
        row.mv_classical = cfg.m * cst.var;
        row.mv_classical_se = cfg.m * cst.var_se;

        if (std::abs(row.mv_classical - 2.0) > 0.05) res.pass_classical = false;
        if (std::abs(row.mv_mc - row.mv_closed) > 3.0 * row.mv_mc_se) res.pass_closed = false;
        if (row.mv_mc < row.lower_bound) res.pass_lower = false;
        res.rows.push_back(row);
    }
    return res;
}

std::vector<TailCurve> psi_tail_experiment(const PsiTailConfig& cfg) {
    std::vector<TailCurve> curves;
    const double s2inv = 1.0 / (cfg.s * cfg.s);
    for (std::size_t di = 0; di < cfg.dims.size(); ++di) {
        const int d = cfg.dims[di];
        TailCurve tc;
        tc.d = d;
        tc.b_psi = std::pow(1.0 + 2.0 * s2inv, 0.5 * d);
        const double e_psi2 =
            std::pow(1.0 + 4.0 * s2inv * s2inv / (1.0 + 4.0 * s2inv), 0.5 * d);
        tc.v_psi = e_psi2 - 1.0;

        // psi = B_psi * exp(-||omega||^2) with ||omega||^2 = chi^2_d / s^2
        std::vector<double> chi2(cfg.n);
        Rng rng(mix_seed(cfg.seed, 3000 + di));
        double sum = 0.0, sumsq = 0.0;
        for (long long i = 0; i < cfg.n; ++i) {
            chi2[i] = rng.chi_squared(d);
            const double psi = tc.b_psi * std::exp(-chi2[i] * s2inv);
            sum += psi;
            sumsq += psi * psi;
        }
        tc.mean_psi = sum / cfg.n;
        const double var = (sumsq - cfg.n * tc.mean_psi * tc.mean_psi) / (cfg.n - 1.0);
        tc.mean_se = std::sqrt(std::max(0.0, var) / cfg.n);
        tc.pass_mean = std::abs(tc.mean_psi - 1.0) <= 4.0 * tc.mean_se;

        std::sort(chi2.begin(), chi2.end());
        for (int g = 0; g < cfg.grid_n; ++g) {
            const double eps = cfg.eps_max * g / (cfg.grid_n - 1.0);
            tc.eps.push_back(eps);
            // psi - 1 > eps  <=>  chi^2 < s^2 log(B_psi/(1+eps))
            double frac = 0.0;
            if (tc.b_psi > 1.0 + eps) {
                const double thr = cfg.s * cfg.s * std::log(tc.b_psi / (1.0 + eps));
                const auto it = std::lower_bound(chi2.begin(), chi2.end(), thr);
                frac = static_cast<double>(it - chi2.begin()) / cfg.n;
            }
            tc.empirical.push_back(frac);
            tc.hoeffding.push_back(std::exp(-2.0 * eps * eps / (tc.b_psi * tc.b_psi)));
            tc.bernstein.push_back(
                std::exp(-eps * eps / (2.0 * (tc.v_psi + tc.b_psi * eps))));
            tc.conjecture.push_back(
                std::exp(-eps * eps / (2.0 * (tc.v_psi + std::sqrt(tc.v_psi) * eps))));
            if (frac > tc.bernstein.back()) tc.pass_bernstein = false;
        }
        curves.push_back(std::move(tc));
    }
    return curves;
}

std::vector<PsiMmRow> psi_mm_moment_experiment(const PsiMmConfig& cfg) {
    const KernelSpec spec(BaseKind::Dirac, cfg.s, cfg.d);
    struct NamedWeight {
        std::string name;
        WeightFunction w;
    };
    std::vector<NamedWeight> weights;
    weights.push_back({"flat", WeightFunction::flat()});
    weights.push_back({"inv_linear",
                       WeightFunction::radial([](double r) { return 1.0 / (1.0 + r); }, spec)});
    weights.push_back({"rational",
                       WeightFunction::radial(
                           [](double r) {
                               const double r2 = r * r;
                               return (r2 * r2 + 1.0) / (r2 * r2 * r2 + 1.0);
                           },
                           spec)});

    std::vector<Eigen::VectorXd> ys;
    Rng yrng(mix_seed(cfg.seed, 4000));
    for (int i = 0; i < cfg.n_y; ++i) {
        Eigen::VectorXd dir(cfg.d);
        for (int c = 0; c < cfg.d; ++c) dir[c] = yrng.gauss();
        dir.normalize();
        ys.push_back(dir * yrng.uniform(cfg.eps, cfg.y_norm_max));
    }

    std::vector<PsiMmRow> rows;
    for (std::size_t wi = 0; wi < weights.size(); ++wi) {
        for (std::size_t yi = 0; yi < ys.size(); ++yi) {
            Rng rng(mix_seed(cfg.seed, 5000 + wi * 100 + yi));
            const Eigen::VectorXd& y = ys[yi];
            double sum = 0.0, sumsq = 0.0;
            Eigen::VectorXd omega(cfg.d);
            for (long long i = 0; i < cfg.n_samples; ++i) {
                if (weights[wi].w.kind() == WeightFunction::Kind::Flat) {
                    for (int c = 0; c < cfg.d; ++c) omega[c] = rng.gauss() / cfg.s;
                } else {
                    const double r = weights[wi].w.sample_radius(rng.uniform());
                    double nrm = 0.0;
                    do {
                        for (int c = 0; c < cfg.d; ++c) omega[c] = rng.gauss();
                        nrm = omega.norm();
                    } while (!(nrm > 0.0));
                    omega *= r / nrm;
                }
                const double wv = weights[wi].w(omega.norm());
                const double val = std::cos(omega.dot(y)) / (wv * wv);
                const double sq = val * val;
                sum += sq;
                sumsq += sq * sq;
            }
            PsiMmRow row;
            row.weight = weights[wi].name;
            row.y_norm = y.norm();
            row.estimate = sum / cfg.n_samples;
            const double var =
                (sumsq - cfg.n_samples * row.estimate * row.estimate) / (cfg.n_samples - 1.0);
            row.se = std::sqrt(std::max(0.0, var) / cfg.n_samples);
            row.pass = row.estimate + 3.0 * row.se >= 0.25;
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<OmegaCubedRow> omega_cubed_tail_experiment(const OmegaCubedConfig& cfg) {
    std::vector<double> moments(cfg.replicates);
    for (int r = 0; r < cfg.replicates; ++r) {
        Rng rng = Rng::stream(mix_seed(cfg.seed, 6000), static_cast<std::uint64_t>(r));
        double acc = 0.0;
        for (int j = 0; j < cfg.m; ++j) {
            double n2 = 0.0;
            for (int c = 0; c < cfg.d; ++c) {
                const double g = rng.gauss() / cfg.s;
                n2 += g * g;
            }
            acc += std::pow(n2, 1.5);
        }
        moments[r] = acc / cfg.m;
    }
    double mean = 0.0;
    for (double v : moments) mean += v;
    mean /= cfg.replicates;

    std::vector<OmegaCubedRow> rows;
    const double s3 = cfg.s * cfg.s * cfg.s;
    for (double tau : cfg.taus) {
        OmegaCubedRow row;
        row.tau = tau;
        row.threshold = (4.0 / s3) *
                        (std::pow(static_cast<double>(cfg.d), 1.5) * std::sqrt(8.0 / M_PI) + tau);
        long long count = 0;
        for (double v : moments)
            if (v > row.threshold) ++count;
        row.empirical = static_cast<double>(count) / cfg.replicates;
        row.bound = std::exp(-0.5 * std::pow(cfg.m * tau, 2.0 / 3.0));
        row.se = std::sqrt(std::max(row.bound * (1.0 - row.bound), 1e-12) / cfg.replicates);
        row.mean_moment = mean;
        row.pass = row.empirical <= row.bound + 3.0 * row.se;
        rows.push_back(row);
    }
    return rows;
}

bool InequalityLedger::all_pass() const {
    for (const auto& e : entries)
        if (!e.pass()) return false;
    return true;
}

namespace {

// generic driver: scan the grid, record worst margin and witness, then
// re-check 100 random passing points in extended precision
InequalityEntry run_inequality(
    const std::string& name, std::uint64_t seed, long long n_points,
    const std::function<std::vector<double>(Rng&, long long)>& point,
    const std::function<double(const std::vector<double>&)>& margin,
    const std::function<long double(const std::vector<double>&)>& margin_ld) {
    InequalityEntry e;
    e.name = name;
    e.points = n_points;
    e.worst_margin = -1e300;
    Rng rng(seed);
    for (long long i = 0; i < n_points; ++i) {
        const auto p = point(rng, i);
        const double m = margin(p);
        if (m > e.worst_margin) {
            e.worst_margin = m;
            e.witness = p;
        }
        if (m > 1e-12) ++e.violations;
    }
    Rng arng(seed ^ 0x5bf03635ULL);
    for (int i = 0; i < 100; ++i) {
        const long long j =
            static_cast<long long>(arng.next_u64() % static_cast<std::uint64_t>(n_points));
        const auto p = point(arng, j);
        if (margin_ld(p) > 1e-12L) e.audit_pass = false;
    }
    return e;
}

} // namespace

InequalityLedger inequality_suite(std::uint64_t seed) {
    InequalityLedger ledger;

    // e^{alpha t^2/2 + t} - t <= e^{(alpha+2) t^2}, compared in the log domain
    {
        const int n_alpha = 100, n_t = 10000;
        auto point = [&](Rng&, long long i) {
            const long long ia = i / n_t, it = i % n_t;
            const double alpha =
                0.1 * std::pow(100.0, ia / (n_alpha - 1.0));  // 0.1 .. 10, log-spaced
            const double t = 10.0 * it / (n_t - 1.0);
            return std::vector<double>{alpha, t};
        };
        auto margin = [](const std::vector<double>& p) {
            const double alpha = p[0], t = p[1];
            const double a = 0.5 * alpha * t * t + t;
            const double lhs = a + std::log1p(-t * std::exp(-a));
            return lhs - (alpha + 2.0) * t * t;
        };
        auto margin_ld = [](const std::vector<double>& p) -> long double {
            const long double alpha = p[0], t = p[1];
            const long double a = 0.5L * alpha * t * t + t;
            const long double lhs = a + std::log1p(-t * std::exp(-a));
            return lhs - (alpha + 2.0L) * t * t;
        };
        ledger.entries.push_back(run_inequality("exp_upper_bound", mix_seed(seed, 1),
                                                static_cast<long long>(n_alpha) * n_t, point,
                                                margin, margin_ld));
    }

    // |(a - bu - cv + duv)| / (sqrt(1+u^2-2eu) sqrt(1+v^2-2fv)) <= 3 max(9 terms)
    {
        auto point = [](Rng& rng, long long) {
            return std::vector<double>{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                                       rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                                       rng.uniform(0.0, 0.99), rng.uniform(0.0, 0.99),
                                       rng.uniform(),          rng.uniform()};
        };
        auto eval = [](const auto& p, auto cast) {
            const auto a = cast(p[0]), b = cast(p[1]), c = cast(p[2]), d = cast(p[3]);
            const auto e = cast(p[4]), f = cast(p[5]), u = cast(p[6]), v = cast(p[7]);
            const auto lhs = std::abs(a - b * u - c * v + d * u * v) /
                             (std::sqrt(1 + u * u - 2 * e * u) * std::sqrt(1 + v * v - 2 * f * v));
            const auto se = std::sqrt(1 - e), sf = std::sqrt(1 - f);
            const auto rhs =
                3 * std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d),
                              std::abs(b - a) / se, std::abs(d - c) / se,
                              std::abs(d - b) / sf, std::abs(c - a) / sf,
                              std::abs(a - b - c + d) / (se * sf)});
            return lhs - rhs;
        };
        auto margin = [eval](const std::vector<double>& p) {
            return eval(p, [](double x) { return x; });
        };
        auto margin_ld = [eval](const std::vector<double>& p) -> long double {
            return eval(p, [](double x) { return static_cast<long double>(x); });
        };
        ledger.entries.push_back(
            run_inequality("ratio_2d", mix_seed(seed, 2), 1000000, point, margin, margin_ld));
    }

    // |alpha - beta t| / sqrt(1+t^2-2 gamma t) <= sqrt(3) max(|alpha|, |beta|,
    // |beta-alpha|/sqrt(2(1-gamma)))
    {
        auto point = [](Rng& rng, long long) {
            return std::vector<double>{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                                       rng.uniform(0.0, 0.999), rng.uniform()};
        };
        auto eval = [](const auto& p, auto cast) {
            const auto a = cast(p[0]), b = cast(p[1]), g = cast(p[2]), t = cast(p[3]);
            const auto lhs = std::abs(a - b * t) / std::sqrt(1 + t * t - 2 * g * t);
            const auto rhs = std::sqrt(cast(3.0)) *
                             std::max({std::abs(a), std::abs(b),
                                       std::abs(b - a) / std::sqrt(2 * (1 - g))});
            return lhs - rhs;
        };
        auto margin = [eval](const std::vector<double>& p) {
            return eval(p, [](double x) { return x; });
        };
        auto margin_ld = [eval](const std::vector<double>& p) -> long double {
            return eval(p, [](double x) { return static_cast<long double>(x); });
        };
        ledger.entries.push_back(
            run_inequality("ratio_1d", mix_seed(seed, 3), 1000000, point, margin, margin_ld));
    }

    // alpha(r) <= 3^{1/4} max(sigma, r) and |alpha'(r)| <= 1
    {
        const int n_sigma = 100, n_r = 1000;
        auto point = [&](Rng&, long long i) {
            const long long is = i / n_r, ir = i % n_r;
            const double sigma = 0.1 * std::pow(100.0, is / (n_sigma - 1.0));
            const double r = 10.0 * sigma * (ir + 1.0) / n_r;
            return std::vector<double>{sigma, r};
        };
        auto margin = [](const std::vector<double>& p) {
            const double sigma = p[0], r = p[1];
            const double a = alpha_profile_value(sigma, r);
            const double ap = alpha_profile_derivative(sigma, r);
            const double m1 = a - std::pow(3.0, 0.25) * std::max(sigma, r);
            const double m2 = std::abs(ap) - 1.0;
            return std::max(m1, m2);
        };
        auto margin_ld = [margin](const std::vector<double>& p) -> long double {
            return margin(p);
        };
        ledger.entries.push_back(run_inequality("alpha_bounds", mix_seed(seed, 4),
                                                static_cast<long long>(n_sigma) * n_r, point,
                                                margin, margin_ld));
    }

    // e^{-lambda} / sqrt(1-2 lambda) <= e^{2 lambda^2} for |lambda| <= 1/4
    {
        const int n = 10000;
        auto point = [&](Rng&, long long i) {
            return std::vector<double>{-0.25 + 0.5 * i / (n - 1.0)};
        };
        auto eval = [](const auto& p, auto cast) {
            const auto l = cast(p[0]);
            return -l - cast(0.5) * std::log(1 - 2 * l) - 2 * l * l;
        };
        auto margin = [eval](const std::vector<double>& p) {
            return eval(p, [](double x) { return x; });
        };
        auto margin_ld = [eval](const std::vector<double>& p) -> long double {
            return eval(p, [](double x) { return static_cast<long double>(x); });
        };
        ledger.entries.push_back(
            run_inequality("chi2_mgf", mix_seed(seed, 5), n, point, margin, margin_ld));
    }

    return ledger;
}

std::vector<RipProbRow> rip_probability_experiment(const RipProbConfig& cfg) {
    const KernelSpec spec(BaseKind::Dirac, cfg.s, cfg.d);
    const CoherenceResult coh = mutual_coherence(spec, cfg.eps, cfg.k, mix_seed(cfg.seed, 7000));
    const double mu = coh.estimate;
    const double c = (2.0 * cfg.k - 1.0) * mu;
    const double threshold = (4.0 * c + cfg.tau) / (1.0 - c);

    DomainSpec dom;
    dom.which = ProcessKind::D;
    dom.eps = cfg.eps;
    dom.diameter = 2.0 * cfg.box * std::sqrt(static_cast<double>(cfg.d));
    dom.dim = cfg.d;

    std::vector<RipProbRow> rows;
    const WeightFunction flat = WeightFunction::flat();
    std::uint64_t run_idx = 0;
    for (Scheme scheme : cfg.schemes) {
        for (int m : cfg.ms) {
            RipProbRow row;
            row.scheme = scheme_name(scheme);
            row.m = m;
            row.threshold = threshold;
            row.draws = cfg.draws;
            for (int r = 0; r < cfg.draws; ++r) {
                const std::uint64_t op_seed = mix_seed(cfg.seed, 8000 + (++run_idx));
                const FrequencyMatrix fm =
                    scheme == Scheme::IID ? sample_iid(spec, flat, m, op_seed)
                                          : sample_structured(spec, m, scheme, op_seed);
                const SketchOperator op(fm, spec);
                const PsiEvaluator ev(op);
                const RipReport rep =
                    compute_rip_report(ev, dom, mu, cfg.k, cfg.sup_seeds, cfg.sup_refine);
                Rng srng(mix_seed(cfg.seed, 9000 + run_idx));
                const double emp =
                    empirical_delta_sk(op, cfg.k, cfg.n_secants, cfg.eps, cfg.box, srng);
                if (rep.bound_defined) {
                    ++row.defined;
                    if (rep.bound_delta_sk > threshold) row.frac_bound_exceed += 1.0;
                    if (emp <= rep.bound_delta_sk) ++row.dominated;
                }
                if (emp > threshold) row.frac_emp_exceed += 1.0;
            }
            row.frac_bound_exceed /= cfg.draws;
            row.frac_emp_exceed /= cfg.draws;
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<LegacyRow> legacy_lower_bound_experiment(double s, int d) {
    const KernelSpec dirac(BaseKind::Dirac, s, d);
    const KernelSpec gauss(BaseKind::Gaussian, s, d);
    auto flat = [](double) { return 1.0; };
    auto quad = [](double r) { return std::max(1.0, r * r); };

    std::vector<LegacyRow> rows;
    auto add = [&](const KernelSpec& spec, const std::string& base, const std::string& wname,
                   const std::function<double(double)>& w) {
        LegacyRow row;
        row.base = base;
        row.weight = wname;
        row.slope = legacy_growth_slope(spec, w);
        row.classification = row.slope > 0.1 ? "infinite" : "finite";
        rows.push_back(row);
    };
    add(dirac, "dirac", "flat", flat);
    add(dirac, "dirac", "max(1,r^2)", quad);
    add(gauss, "gaussian", "flat", flat);
    return rows;
}

} // namespace mixrip
