// Acceptance suite: one criterion per --only index, one PASS/FAIL line each.
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mixrip/experiments.hpp"
#include "mixrip/frequencies.hpp"
#include "mixrip/kernels.hpp"
#include "mixrip/mixtures.hpp"
#include "mixrip/ripbounds.hpp"
#include "mixrip/rng.hpp"
#include "mixrip/sketch.hpp"
#include "mixrip/util.hpp"

using namespace mixrip;
using Eigen::VectorXd;

namespace {

// ---- criterion 1: monopole identity for the Dirac base with flat weights ----

bool crit1() {
    Rng rng(101);
    for (int rep = 0; rep < 50; ++rep) {
        const int d = 1 + static_cast<int>(rng.next_u64() % 5);
        const int m = 1 + static_cast<int>(rng.next_u64() % 64);
        const double s = rng.uniform(0.5, 3.0);
        KernelSpec spec(BaseKind::Dirac, s, d);
        SketchOperator op(sample_iid(spec, WeightFunction::flat(), m, 1000 + rep), spec);
        PsiEvaluator ev(op);
        if (std::abs(ev.psi_m() - 1.0) > 1e-12) return false;
        if (std::abs(1.0 - ev.psi_m()) > 1e-12) return false;
    }
    return true;
}

// ---- criterion 2: unbiased squared feature moments over secants ----

bool check_unbiased(const KernelSpec& spec, const SignedMixture& nu,
                    const FrequencyMatrix& fm) {
    const SketchOperator op(fm, spec);
    const ComplexSketch sk = op.sketch_signed_mixture(nu);
    const int m = fm.count();
    std::vector<double> vals(m);
    for (int j = 0; j < m; ++j) vals[j] = static_cast<double>(m) * std::norm(sk.values(j));
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= m;
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    var /= (m - 1.0);
    const double se = std::sqrt(var / m);
    const double target = mmd_norm_sq(nu, spec);
    return std::abs(mean - target) <= 4.0 * se;
}

bool crit2() {
    KernelSpec spec(BaseKind::Dirac, 1.0, 2);
    Rng rng(202);
    for (int rep = 0; rep < 20; ++rep) {
        const SignedMixture nu = sample_secant(3, spec, 1.0, 10.0, rng);
        const FrequencyMatrix fm =
            sample_iid(spec, WeightFunction::flat(), 100000, 5000 + rep);
        if (!check_unbiased(spec, nu, fm)) return false;
    }
    return true;
}

// ---- criterion 3: sketch variance sweep ----

bool crit3() {
    VarianceConfig cfg;
    cfg.seed = 303;
    const VarianceResult res = variance_experiment(cfg);
    for (const auto& r : res.rows)
        std::printf("  k=%-3d mc=%9.4f closed=%9.4f classical=%7.4f lb=%8.4f\n", r.k,
                    r.mv_mc, r.mv_closed, r.mv_classical, r.lower_bound);
    return res.pass_classical && res.pass_closed && res.pass_lower;
}

// ---- criterion 4: per-frequency weight tail against the analytic curves ----

bool crit4() {
    PsiTailConfig cfg;
    cfg.seed = 404;
    const auto curves = psi_tail_experiment(cfg);
    bool ok = true;
    for (const auto& tc : curves) {
        ok = ok && tc.pass_bernstein && tc.pass_mean;
        if (tc.d == 100) {
            for (std::size_t i = 0; i < tc.eps.size(); ++i)
                if (tc.eps[i] <= 1.0 + 1e-12 && tc.hoeffding[i] < 0.5) ok = false;
        }
        std::printf("  d=%-4d mean=%.5f bernstein %s\n", tc.d, tc.mean_psi,
                    tc.pass_bernstein ? "ok" : "violated");
    }
    return ok;
}

// ---- criterion 5: second moment of the monopole process ----

bool crit5() {
    PsiMmConfig cfg;
    cfg.seed = 505;
    const auto rows = psi_mm_moment_experiment(cfg);
    bool ok = !rows.empty();
    for (const auto& r : rows) ok = ok && r.pass;
    return ok;
}

// ---- criterion 6: Lipschitz property of the four processes ----

bool crit6() {
    KernelSpec spec(BaseKind::Dirac, 1.0, 2);
    SketchOperator op(sample_iid(spec, WeightFunction::flat(), 128, 606), spec);
    PsiEvaluator ev(op);
    const double eps = 1.0, diam = 20.0;
    const double lip = lipschitz_bound(ev, compute_c_kappa(spec, eps));
    Rng rng(607);
    auto rand_x = [&]() {
        VectorXd v(2);
        v << rng.gauss(), rng.gauss();
        const double r = eps * std::max(1e-4, std::pow(rng.uniform(), 0.5));
        return VectorXd(r * spec.a_unit(v));
    };
    auto rand_y = [&]() {
        VectorXd v(2);
        v << rng.gauss(), rng.gauss();
        return VectorXd(rng.uniform(eps, diam) * spec.a_unit(v));
    };
    const double slack = 1e-10;
    for (int i = 0; i < 10000; ++i) {
        const VectorXd x = rand_x(), xp = rand_x();
        if (std::abs(ev.big_psi_d(x) - ev.big_psi_d(xp)) >
            lip * metric_d(spec, x, xp) + slack)
            return false;
    }
    for (int i = 0; i < 10000; ++i) {
        const VectorXd y = rand_y(), yp = rand_y();
        if (std::abs(ev.big_psi_mm(y) - ev.big_psi_mm(yp)) >
            lip * metric_mm(spec, y, yp) + slack)
            return false;
    }
    for (int i = 0; i < 10000; ++i) {
        const VectorXd x = rand_x(), xp = rand_x();
        const VectorXd y = rand_y(), yp = rand_y();
        if (std::abs(ev.big_psi_md(x, y) - ev.big_psi_md(xp, yp)) >
            lip * metric_md(spec, x, y, xp, yp) + slack)
            return false;
    }
    for (int i = 0; i < 10000; ++i) {
        const VectorXd x1 = rand_x(), x2 = rand_x(), x1p = rand_x(), x2p = rand_x();
        const VectorXd y = rand_y(), yp = rand_y();
        if (std::abs(ev.big_psi_dd(x1, x2, y) - ev.big_psi_dd(x1p, x2p, yp)) >
            lip * metric_dd(spec, x1, x2, y, x1p, x2p, yp) + slack)
            return false;
    }
    return true;
}

// ---- criterion 7: dense one-dimensional oracles ----

PsiEvaluator make_oracle(const KernelSpec& spec, const WeightFunction& w) {
    Eigen::MatrixXd om(1, 6);
    om << 0.3, 0.7, 1.1, 1.9, 2.6, 3.4;
    FrequencyMatrix fm;
    fm.omegas = om;
    fm.scheme = Scheme::IID;
    fm.weight = w;
    fm.seed = 0;
    return PsiEvaluator(SketchOperator(fm, spec));
}

bool dipole_sup_identity(const PsiEvaluator& ev, double eps) {
    // sup over (alpha, x) against the two boundary suprema
    const int nx = 1000, na = 1000;
    double full = 0.0, balanced = 0.0;
    const double mono = std::abs(1.0 - ev.psi_m());
    VectorXd x(1);
    for (int i = 0; i < nx; ++i) {
        x(0) = eps * (i + 1.0) / nx;
        for (int a = 0; a <= na; ++a) {
            const double alpha = static_cast<double>(a) / na;
            const double v = std::abs(ev.dipole_norm_sq(alpha, x) - 1.0);
            full = std::max(full, v);
            if (a == na) balanced = std::max(balanced, v);
        }
    }
    const double rhs = std::max(mono, balanced);
    std::printf("  sup=%.6f boundary max=%.6f (mono %.6f, balanced %.6f)\n", full, rhs,
                mono, balanced);
    return std::abs(full - rhs) <= 1e-3;
}

bool coherence_ratio(const PsiEvaluator& ev, double eps) {
    const Eigen::VectorXd& om = ev.omegas().row(0);
    const KernelSpec& spec = ev.spec();
    auto cross = [&](double u, double v) {
        return (om * (u - v)).array().cos().mean();
    };
    double full = 0.0, mm = 0.0, md = 0.0, dd = 0.0;
    const int ng = 40, nu = 25, na = 16;
    for (int i1 = 1; i1 <= ng; ++i1) {
        const double g1 = eps * i1 / ng;
        for (int i3 = 1; i3 <= ng; ++i3) {
            const double g3 = eps * i3 / ng;
            for (int iu = 0; iu < nu; ++iu) {
                const double gap = eps * (1.0 + 3.0 * iu / (nu - 1.0));
                for (int sgn = 0; sgn < 4; ++sgn) {
                    const double s1 = (sgn & 1) ? -1.0 : 1.0;
                    const double s2 = (sgn & 2) ? -1.0 : 1.0;
                    const double t1a = 0.0, t1b = s1 * g1;
                    const double left2 = std::max(t1a, t1b) + gap;
                    const double t2a = left2 + (s2 < 0.0 ? g3 : 0.0);
                    const double t2b = t2a + s2 * g3;
                    const double a = cross(t1a, t2a), b = cross(t1a, t2b);
                    const double c = cross(t1b, t2a), d = cross(t1b, t2b);
                    const double k1 = spec.radial_kernel(g1);
                    const double k2 = spec.radial_kernel(g3);
                    for (int a1 = 0; a1 <= na; ++a1) {
                        const double al1 = static_cast<double>(a1) / na;
                        const double n1 = std::sqrt((1.0 - al1) * (1.0 - al1) +
                                                    2.0 * al1 * (1.0 - k1));
                        for (int a2 = 0; a2 <= na; ++a2) {
                            const double al2 = static_cast<double>(a2) / na;
                            const double n2 = std::sqrt((1.0 - al2) * (1.0 - al2) +
                                                        2.0 * al2 * (1.0 - k2));
                            const double inner = std::abs(a - al2 * b - al1 * c +
                                                          al1 * al2 * d) / (n1 * n2);
                            full = std::max(full, inner);
                            if (a1 == 0 && a2 == 0) mm = std::max(mm, inner);
                            if (a1 == na && a2 == na) dd = std::max(dd, inner);
                            if ((a1 == 0 && a2 == na) || (a1 == na && a2 == 0))
                                md = std::max(md, inner);
                        }
                    }
                }
            }
        }
    }
    const double reduced = std::max({mm, md, dd});
    const double ratio = full / reduced;
    std::printf("  mu=%.6f reduced=(%.6f,%.6f,%.6f) ratio=%.4f\n", full, mm, md, dd,
                ratio);
    return ratio >= 1.0 - 1e-12 && ratio <= 3.0;
}

bool crit7() {
    KernelSpec spec(BaseKind::Dirac, 1.0, 1);
    const double eps = 1.0;
    bool ok = dipole_sup_identity(make_oracle(spec, WeightFunction::flat()), eps);
    WeightFunction wt = WeightFunction::radial(
        [](double r) { return 1.0 + 0.5 * r; }, spec);
    ok = dipole_sup_identity(make_oracle(spec, wt), eps) && ok;
    ok = coherence_ratio(make_oracle(spec, WeightFunction::flat()), eps) && ok;
    return ok;
}

// ---- criterion 8: deterministic domination over operator draws ----

bool crit8() {
    RipProbConfig cfg;
    cfg.seed = 808;
    cfg.d = 2;
    cfg.k = 2;
    cfg.s = 1.0;
    cfg.eps = 10.0;
    cfg.tau = 0.5;
    cfg.box = 40.0;
    cfg.ms = {4096};
    cfg.schemes = {Scheme::IID};
    cfg.draws = 200;
    cfg.n_secants = 500;
    cfg.sup_seeds = 384;
    cfg.sup_refine = 8;
    const auto rows = rip_probability_experiment(cfg);
    if (rows.size() != 1) return false;
    const auto& r = rows[0];
    std::printf("  draws=%d defined=%d dominated=%d\n", r.draws, r.defined, r.dominated);
    return r.defined > 0 && r.dominated == r.defined;
}

// ---- criterion 9: inequality ledger ----

bool crit9() {
    const InequalityLedger ledger = inequality_suite(909);
    for (const auto& e : ledger.entries)
        std::printf("  %-16s violations=%lld worst=%.3e audit=%s\n", e.name.c_str(),
                    e.violations, e.worst_margin, e.audit_pass ? "ok" : "failed");
    return ledger.all_pass();
}

// ---- criterion 10: quasi-Pythagorean sandwich of the decomposition weights ----

bool crit10() {
    KernelSpec spec(BaseKind::Dirac, 1.0, 2);
    const double eps = 10.0, box = 40.0;
    const int k = 3;
    const CoherenceResult coh = mutual_coherence(spec, eps, k, 1010);
    const double c = (2.0 * k - 1.0) * coh.estimate;
    if (c >= 1.0) return false;
    const double lo = 1.0 / (1.0 + c), hi = 1.0 / (1.0 - c);
    Rng rng(1011);
    for (int rep = 0; rep < 1000; ++rep) {
        const Mixture p = sample_mixture(k, spec, eps, box, rng);
        const Mixture q = sample_mixture(k, spec, eps, box, rng);
        const SignedMixture nu = SignedMixture::difference(p, q);
        const double total = mmd_norm(nu, spec);
        if (!(total > 1e-10)) continue;
        const auto dipoles = dipole_decompose(p, q, spec, eps);
        double sum_sq = 0.0;
        for (const auto& dp : dipoles) {
            const double n = mmd_norm(dp.as_signed_mixture(), spec);
            sum_sq += (n / total) * (n / total);
        }
        if (sum_sq < lo - 1e-12 || sum_sq > hi + 1e-12) {
            std::printf("  violation at rep %d: sum=%.12f outside [%.12f, %.12f]\n", rep,
                        sum_sq, lo, hi);
            return false;
        }
    }
    return true;
}

// ---- criterion 11: structured scheme marginals and unbiasedness ----

bool crit11() {
    KernelSpec spec(BaseKind::Dirac, 1.0, 4);
    const int m = 40000;
    const FrequencyMatrix fm = sample_structured(spec, m, Scheme::OrthoChi, 1101);
    const double crit = ks_critical(m, 0.01);
    for (int coord = 0; coord < 4; ++coord) {
        std::vector<double> xs(m);
        for (int j = 0; j < m; ++j) xs[j] = fm.omegas(coord, j);
        std::sort(xs.begin(), xs.end());
        double ks = 0.0;
        for (int j = 0; j < m; ++j) {
            const double f = 0.5 * std::erfc(-xs[j] / std::sqrt(2.0));
            ks = std::max(ks, std::max(std::abs(f - j / static_cast<double>(m)),
                                       std::abs(f - (j + 1) / static_cast<double>(m))));
        }
        std::printf("  coord %d: KS=%.5f critical=%.5f\n", coord, ks, crit);
        if (ks > crit) return false;
    }
    Rng rng(1102);
    for (int rep = 0; rep < 20; ++rep) {
        const SignedMixture nu = sample_secant(3, spec, 1.0, 10.0, rng);
        const FrequencyMatrix f2 =
            sample_structured(spec, 100000, Scheme::OrthoChi, 2200 + rep);
        if (!check_unbiased(spec, nu, f2)) return false;
    }
    return true;
}

// ---- criterion 12: sketch-size doubling ratio ----

bool crit12() {
    SketchSizeParams p;
    p.d = 10;
    p.s = 1.0;
    p.tau = 0.2;
    p.mu = 1e-3;
    p.eps = 1.0 * 4.0 * std::sqrt(std::log(5.0 * std::exp(1.0) * 16.0));
    std::vector<double> ms;
    for (int k : {2, 4, 8, 16}) {
        p.k = k;
        const SketchSizeResult r = sketch_size(SufficientSize::DiracMix, p);
        if (!r.ok) {
            std::printf("  precondition violated at k=%d: %s\n", k, r.violated.c_str());
            return false;
        }
        ms.push_back(r.m);
        std::printf("  k=%-3d m=%.3e\n", k, r.m);
    }
    for (std::size_t i = 0; i + 1 < ms.size(); ++i) {
        const double ratio = ms[i + 1] / ms[i];
        std::printf("  ratio %g\n", ratio);
        if (ratio < 3.0 || ratio > 5.0) return false;
    }
    return true;
}

// ---- criterion 13: third frequency moment tail ----

bool crit13() {
    OmegaCubedConfig cfg;
    cfg.seed = 1313;
    const auto rows = omega_cubed_tail_experiment(cfg);
    bool ok = rows.size() == 5;
    for (const auto& r : rows) {
        ok = ok && r.pass;
        std::printf("  tau=%-5.2f empirical=%.4e bound=%.4e\n", r.tau, r.empirical,
                    r.bound);
    }
    return ok;
}

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc)
            only = std::atoi(argv[i + 1]);
    }
    bool (*crits[])() = {crit1, crit2, crit3,  crit4,  crit5,  crit6, crit7,
                         crit8, crit9, crit10, crit11, crit12, crit13};
    bool all = true;
    for (int i = 1; i <= 13; ++i) {
        if (only != 0 && only != i) continue;
        const bool ok = crits[i - 1]();
        std::printf("criterion %d: %s\n", i, ok ? "PASS" : "FAIL");
        all = all && ok;
    }
    return all ? 0 : 1;
}
