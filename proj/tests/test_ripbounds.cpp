#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "mixrip/ripbounds.hpp"
#include "mixrip/rng.hpp"

using namespace mixrip;
using Eigen::VectorXd;

namespace {

VectorXd vec2(double a, double b) {
    VectorXd v(2);
    v << a, b;
    return v;
}

SketchOperator make_op(int m = 512, std::uint64_t seed = 3, double s = 1.0) {
    KernelSpec spec(BaseKind::Dirac, s, 2);
    return SketchOperator(sample_iid(spec, WeightFunction::flat(), m, seed), spec);
}

} // namespace

TEST_CASE("psi weight values") {
    // Dirac base, flat weight: psi is identically 1
    KernelSpec dirac(BaseKind::Dirac, 1.0, 2);
    CHECK(psi_weight(dirac, WeightFunction::flat(), vec2(3.0, -1.0)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // Gaussian base, s = sqrt(2), d = 2, omega = 0: g = 1, base norm sq = 1/2
    KernelSpec gauss(BaseKind::Gaussian, std::sqrt(2.0), 2);
    CHECK(psi_weight(gauss, WeightFunction::flat(), vec2(0.0, 0.0)) ==
          doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("process kernel point values") {
    KernelSpec spec(BaseKind::Dirac, 1.0, 2);
    const VectorXd x = vec2(1.0, 0.0);
    const VectorXd w = vec2(M_PI, 0.0);
    // (1 - cos(pi)) / (1 - e^{-1/2})
    CHECK(f_d(spec, x, w) ==
          doctest::Approx(2.0 / (1.0 - std::exp(-0.5))).epsilon(1e-12));
    CHECK(f_mm(vec2(0.0, 0.0), w) == doctest::Approx(1.0));
    CHECK(f_mm(x, w) == doctest::Approx(-1.0));
    CHECK_THROWS(f_d(spec, vec2(0.0, 0.0), w));
}

TEST_CASE("psi_m is one for dirac flat") {
    SketchOperator op = make_op();
    PsiEvaluator ev(op);
    CHECK(ev.psi_m() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ev.count() == 512);
}

TEST_CASE("big psi matches the pointwise kernels") {
    SketchOperator op = make_op(64);
    PsiEvaluator ev(op);
    const VectorXd x1 = vec2(0.8, -0.4), x2 = vec2(-0.3, 1.1), y = vec2(2.0, 5.0);
    double acc = 0.0;
    for (int j = 0; j < ev.count(); ++j)
        acc += ev.psi_values()[j] * f_dd(ev.spec(), x1, x2, y, ev.omegas().col(j));
    CHECK(ev.big_psi_dd(x1, x2, y) == doctest::Approx(acc / ev.count()).epsilon(1e-12));
    acc = 0.0;
    for (int j = 0; j < ev.count(); ++j)
        acc += ev.psi_values()[j] * f_md(ev.spec(), x1, y, ev.omegas().col(j));
    CHECK(ev.big_psi_md(x1, y) == doctest::Approx(acc / ev.count()).epsilon(1e-12));
}

TEST_CASE("dipole norm identity against the sketch") {
    SketchOperator op = make_op(128, 8);
    PsiEvaluator ev(op);
    Rng rng(4);
    for (double alpha : {0.0, 0.35, 1.0}) {
        const VectorXd x = vec2(1.2 * rng.uniform(0.5, 1.0), -0.7 * rng.uniform(0.5, 1.0));
        Dipole dp;
        dp.theta1 = vec2(0.4, -0.9);
        dp.theta2 = dp.theta1 + x;
        dp.alpha = alpha;
        SignedMixture nu = dp.as_signed_mixture();
        const double kn = mmd_norm(nu, ev.spec());
        const double direct = sketch_norm_sq(op.sketch_signed_mixture(nu)) / (kn * kn);
        CHECK(ev.dipole_norm_sq(alpha, x) == doctest::Approx(direct).epsilon(1e-10));
    }
}

TEST_CASE("cross inner products reduce to the psi processes") {
    SketchOperator op = make_op(128, 15);
    PsiEvaluator ev(op);
    const KernelSpec& spec = ev.spec();

    // two balanced normalized dipoles
    const VectorXd t1 = vec2(0.0, 0.0), x1 = vec2(0.9, 0.2);
    const VectorXd t1p = vec2(4.0, -3.0), x2 = vec2(-0.5, 0.8);
    Dipole d1{t1, t1 + x1, 1.0, 1.0, 1};
    Dipole d2{t1p, t1p + x2, 1.0, 1.0, 1};
    SignedMixture n1 = d1.as_signed_mixture();
    SignedMixture n2 = d2.as_signed_mixture();
    const double s1 = mmd_norm(n1, spec), s2 = mmd_norm(n2, spec);
    const double lhs =
        sketch_inner(op.sketch_signed_mixture(n1), op.sketch_signed_mixture(n2)).real() /
        (s1 * s2);
    // node differences theta1 - theta2 are -x1, -x2 with this construction
    const VectorXd y = t1 - t1p;
    CHECK(lhs == doctest::Approx(ev.big_psi_dd(-x1, -x2, y)).epsilon(1e-10));

    // monopole against a balanced dipole
    SignedMixture mono;
    mono.centers = {vec2(-2.0, 1.0)};
    mono.weights = {1.0};
    const double lhs2 =
        sketch_inner(op.sketch_signed_mixture(mono), op.sketch_signed_mixture(n1)).real() /
        s1;
    const VectorXd ym = mono.centers[0] - t1;
    CHECK(lhs2 == doctest::Approx(ev.big_psi_md(-x1, ym)).epsilon(1e-10));
}

TEST_CASE("sup search finds the origin peak of psi_mm") {
    SketchOperator op = make_op(256, 12);
    PsiEvaluator ev(op);
    DomainSpec dom;
    dom.which = ProcessKind::MM;
    dom.eps = 0.5;
    dom.diameter = 20.0;
    dom.dim = 2;
    SupResult res = sup_search(ev, dom, 512, 8);
    // sup over the shell must be at least the value on the inner boundary
    CHECK(res.value >= std::abs(ev.big_psi_mm(vec2(0.5, 0.0))) - 1e-9);
    CHECK(res.value <= ev.psi_m() + 1e-9);
    REQUIRE(res.argmax.size() == 1);
    const double r = ev.spec().a_norm(res.argmax[0]);
    CHECK(r >= dom.eps - 1e-9);
    CHECK(r <= dom.diameter + 1e-9);
}

TEST_CASE("sup search respects the dipole domain radius") {
    SketchOperator op = make_op(64, 5);
    PsiEvaluator ev(op);
    DomainSpec dom;
    dom.which = ProcessKind::D;
    dom.eps = 1.0;
    dom.diameter = 10.0;
    dom.dim = 2;
    SupResult res = sup_search(ev, dom, 256, 8);
    REQUIRE(res.argmax.size() == 1);
    CHECK(ev.spec().a_norm(res.argmax[0]) <= dom.eps + 1e-9);
}

TEST_CASE("assemble bound example") {
    // c = 3 mu = 0.1, max delta = 0.05, (6k-3) mu_max = 0.09 at k = 2
    RipReport r = assemble_bound(0.95, 0.03, 0.01, 0.008, 0.002, 0.1 / 3.0, 2);
    CHECK(r.bound_defined);
    CHECK(r.c == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(r.delta_m == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(r.bound_delta_sk == doctest::Approx((0.1 + 0.05 + 0.09) / 0.9).epsilon(1e-12));
    CHECK(r.bound_prop2 == doctest::Approx(r.bound_delta_sk).epsilon(1e-12));
    // c >= 1 leaves the bound undefined
    RipReport bad = assemble_bound(1.0, 0.0, 0.0, 0.0, 0.0, 0.5, 2);
    CHECK_FALSE(bad.bound_defined);
}

TEST_CASE("pseudometrics") {
    KernelSpec spec(BaseKind::Dirac, 1.0, 2);
    const VectorXd a = vec2(1.0, 0.0), b = vec2(2.0, 0.0);
    CHECK(metric_d(spec, a, b) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(metric_d(spec, a, a) == doctest::Approx(0.0));
    CHECK(metric_mm(spec, a, b) == doctest::Approx(1.0));
    CHECK(metric_md(spec, a, vec2(0, 0), b, vec2(0, 3)) == doctest::Approx(4.0));
    CHECK_THROWS(metric_d(spec, vec2(0, 0), a));
}

TEST_CASE("covering bound frozen value") {
    CHECK(covering_bound(1, 1.0, 64.0) == doctest::Approx(243.0).epsilon(1e-12));
    CHECK_THROWS(covering_bound(2, 1.0, 0.0));
}

TEST_CASE("sketch size preconditions and monotonicity") {
    SketchSizeParams p;
    p.k = 4;
    p.d = 10;
    p.s = 1.0;
    p.tau = 0.2;
    p.mu = 1e-3;
    p.eps = 1.0 * 4.0 * std::sqrt(std::log(5.0 * std::exp(1.0) * 16.0));
    SketchSizeResult r = sketch_size(SufficientSize::DiracMix, p);
    CHECK(r.ok);
    CHECK(r.violated.empty());
    CHECK(r.m > 0.0);
    CHECK(r.iterations >= 1);

    // coherence precondition violated: named, but m still computed
    SketchSizeParams bad = p;
    bad.mu = 1.0;
    SketchSizeResult rb = sketch_size(SufficientSize::DiracMix, bad);
    CHECK_FALSE(rb.ok);
    CHECK(rb.violated == "mu < 1/(10k)");
    CHECK(rb.m > 0.0);

    // epsilon below the threshold
    SketchSizeParams small = p;
    small.eps = 0.1;
    SketchSizeResult rs = sketch_size(SufficientSize::DiracMix, small);
    CHECK_FALSE(rs.ok);
    CHECK(rs.violated.find("eps") == 0);

    // m grows with k for the Gaussian variant
    SketchSizeParams g = p;
    g.eps = std::sqrt(2.0 + 1.0) * 4.0 * std::sqrt(std::log(5.0 * std::exp(1.0) * 16.0));
    SketchSizeResult g1 = sketch_size(SufficientSize::GaussianMix, g);
    g.k = 8;
    SketchSizeResult g2 = sketch_size(SufficientSize::GaussianMix, g);
    CHECK(g2.m > g1.m);

    // structured variant costs at least a factor d in v
    SketchSizeResult st = sketch_size(SufficientSize::Structured, p);
    CHECK(st.v == doctest::Approx(r.v * p.d).epsilon(1e-12));
}

TEST_CASE("lipschitz bound composition") {
    SketchOperator op = make_op(64, 2);
    PsiEvaluator ev(op);
    SmoothnessProfile prof{1.0, 1.0, 2.5};
    CHECK(lipschitz_bound(ev, prof) == doctest::Approx(6.0 * ev.psi0() * 2.5).epsilon(1e-12));
}

TEST_CASE("empirical delta over secants stays below one for large m") {
    SketchOperator op = make_op(8192, 10);
    Rng rng(5);
    const double d = empirical_delta_sk(op, 2, 20, 1.0, 10.0, rng);
    CHECK(d >= 0.0);
    CHECK(d < 0.5);
}
