#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "mixrip/frequencies.hpp"
#include "mixrip/rng.hpp"

using namespace mixrip;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_CASE("flat weight is identically one") {
    WeightFunction w = WeightFunction::flat();
    CHECK(w(0.0) == doctest::Approx(1.0));
    CHECK(w(37.5) == doctest::Approx(1.0));
    CHECK(w.compatibility_residual() == doctest::Approx(0.0));
}

TEST_CASE("radial table normalizes to compatibility") {
    KernelSpec spec(BaseKind::Dirac, 1.0, 2);
    WeightFunction w =
        WeightFunction::radial([](double r) { return std::max(1.0, r * r); }, spec);
    CHECK(std::abs(w.compatibility_residual()) <= 1e-3);
    CHECK(w(1.0) > 0.0);
    // growing raw profile keeps its shape after rescaling
    CHECK(w(6.0) / w(3.0) == doctest::Approx(4.0).epsilon(1e-2));
}

TEST_CASE("radial table sampling matches the table law roughly") {
    KernelSpec spec(BaseKind::Dirac, 1.0, 2);
    WeightFunction w = WeightFunction::radial([](double) { return 1.0; }, spec);
    // median radius of chi_2 / 1 is sqrt(2 ln 2)
    const double med = w.sample_radius(0.5);
    CHECK(med == doctest::Approx(std::sqrt(2.0 * std::log(2.0))).epsilon(5e-2));
    CHECK(w.sample_radius(0.01) < w.sample_radius(0.99));
}

TEST_CASE("scheme names round trip") {
    CHECK(scheme_name(Scheme::IID) == "iid");
    CHECK(scheme_name(Scheme::OrthoChi) == "orthochi");
    CHECK(scheme_name(Scheme::HadamardRademacher) == "hd");
    CHECK(scheme_from_name("orthochi") == Scheme::OrthoChi);
    CHECK_THROWS(scheme_from_name("qmc"));
}

TEST_CASE("iid sampling is seeded and deterministic") {
    KernelSpec spec(BaseKind::Dirac, 2.0, 3);
    FrequencyMatrix a = sample_iid(spec, WeightFunction::flat(), 16, 5);
    FrequencyMatrix b = sample_iid(spec, WeightFunction::flat(), 16, 5);
    FrequencyMatrix c = sample_iid(spec, WeightFunction::flat(), 16, 6);
    CHECK((a.omegas - b.omegas).norm() == doctest::Approx(0.0));
    CHECK((a.omegas - c.omegas).norm() > 1e-6);
    CHECK(a.dim() == 3);
    CHECK(a.count() == 16);
}

TEST_CASE("iid flat frequencies have variance 1/s^2 per coordinate") {
    const double s = 2.0;
    KernelSpec spec(BaseKind::Dirac, s, 2);
    FrequencyMatrix fm = sample_iid(spec, WeightFunction::flat(), 20000, 11);
    const double var = fm.omegas.row(0).array().square().mean();
    CHECK(var == doctest::Approx(1.0 / (s * s)).epsilon(0.05));
}

TEST_CASE("fwht on small vectors") {
    double v2[2] = {1.0, 0.0};
    fwht(v2, 2);
    CHECK(v2[0] == doctest::Approx(1.0));
    CHECK(v2[1] == doctest::Approx(1.0));
    double v4[4] = {1.0, 1.0, 1.0, 1.0};
    fwht(v4, 4);
    CHECK(v4[0] == doctest::Approx(4.0));
    CHECK(v4[1] == doctest::Approx(0.0));
    CHECK(v4[2] == doctest::Approx(0.0));
    CHECK(v4[3] == doctest::Approx(0.0));
    // H H = n I
    Eigen::VectorXd x(16);
    for (int i = 0; i < 16; ++i) x(i) = std::sin(1.0 + i);
    Eigen::VectorXd y = x;
    fwht(y);
    fwht(y);
    CHECK((y - 16.0 * x).norm() == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("orthochi blocks are orthogonal up to the radial factor") {
    KernelSpec spec(BaseKind::Dirac, 1.0, 4);
    FrequencyMatrix fm = sample_structured(spec, 8, Scheme::OrthoChi, 3);
    REQUIRE(fm.count() == 8);
    for (int b = 0; b < 2; ++b) {
        MatrixXd block = fm.omegas.middleCols(4 * b, 4);
        // normalize columns, then the directions form an orthonormal frame
        for (int j = 0; j < 4; ++j) block.col(j).normalize();
        MatrixXd gram = block.transpose() * block;
        CHECK((gram - MatrixXd::Identity(4, 4)).norm() == doctest::Approx(0.0).epsilon(1e-10));
    }
}

TEST_CASE("structured sampling validates block structure") {
    KernelSpec spec(BaseKind::Dirac, 1.0, 4);
    CHECK_THROWS(sample_structured(spec, 6, Scheme::OrthoChi, 1));  // m not multiple of d
    KernelSpec odd(BaseKind::Dirac, 1.0, 3);
    CHECK_THROWS(sample_structured(odd, 6, Scheme::HadamardRademacher, 1));  // d not 2^p
}

TEST_CASE("hadamard rademacher columns have unit direction norm times chi") {
    KernelSpec spec(BaseKind::Dirac, 1.0, 4);
    FrequencyMatrix fm = sample_structured(spec, 16, Scheme::HadamardRademacher, 9);
    // every column is radius * unit direction, so no column is null
    for (int j = 0; j < fm.count(); ++j) CHECK(fm.omegas.col(j).norm() > 1e-8);
}

TEST_CASE("legacy growth classification") {
    KernelSpec dirac(BaseKind::Dirac, 1.0, 2);
    KernelSpec gauss(BaseKind::Gaussian, 1.0, 2);
    auto flat = [](double) { return 1.0; };
    auto quad = [](double r) { return std::max(1.0, r * r); };
    CHECK(check_legacy_condition(dirac, flat) == GrowthClass::Infinite);
    CHECK(check_legacy_condition(dirac, quad) == GrowthClass::Finite);
    CHECK(check_legacy_condition(gauss, flat) == GrowthClass::Finite);
    CHECK(legacy_growth_slope(dirac, flat) > 0.5);
}

TEST_CASE("binary round trip") {
    KernelSpec spec(BaseKind::Dirac, 1.0, 3);
    FrequencyMatrix fm = sample_iid(spec, WeightFunction::flat(), 32, 77);
    const std::string path = (std::filesystem::temp_directory_path() / "fm_test.mxrp").string();
    save_frequency_matrix(fm, path);
    FrequencyMatrix back = load_frequency_matrix(path);
    CHECK(back.dim() == 3);
    CHECK(back.count() == 32);
    CHECK(back.seed == 77);
    CHECK(back.scheme == Scheme::IID);
    CHECK((back.omegas - fm.omegas).norm() == doctest::Approx(0.0));
    std::filesystem::remove(path);
}

TEST_CASE("csv export writes one line per frequency plus header") {
    KernelSpec spec(BaseKind::Dirac, 1.0, 2);
    FrequencyMatrix fm = sample_iid(spec, WeightFunction::flat(), 5, 1);
    const std::string path = (std::filesystem::temp_directory_path() / "fm_test.csv").string();
    export_frequency_csv(fm, path);
    std::ifstream in(path);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 6);
    std::filesystem::remove(path);
}
