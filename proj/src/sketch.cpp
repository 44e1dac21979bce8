#include "mixrip/sketch.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "mixrip/util.hpp"

namespace mixrip {

SketchOperator::SketchOperator(const FrequencyMatrix& freqs, const KernelSpec& spec)
    : freqs_(freqs), spec_(spec) {
    if (freqs.dim() != spec.dim())
        throw std::invalid_argument("SketchOperator: dimension mismatch");
    const int m = freqs.count();
    g_over_w_.resize(m);
    for (int j = 0; j < m; ++j) {
        const Eigen::VectorXd omega = freqs_.omegas.col(j);
        g_over_w_[j] = spec.char_fn(omega) / freqs_.weight(omega.norm());
    }
}

ComplexSketch SketchOperator::sketch_signed_mixture(const SignedMixture& nu) const {
    const int m = freqs_.count();
    const double inv_sqrt_m = m > 0 ? 1.0 / std::sqrt(static_cast<double>(m)) : 0.0;
    ComplexSketch out;
    out.values = Eigen::VectorXcd::Zero(m);
    for (std::size_t i = 0; i < nu.centers.size(); ++i) {
        if (nu.centers[i].size() != freqs_.dim())
            throw std::invalid_argument("sketch_signed_mixture: dimension mismatch");
        const Eigen::VectorXd phase = freqs_.omegas.transpose() * nu.centers[i];
        const double w = nu.weights[i];
        for (int j = 0; j < m; ++j)
            out.values[j] += w * std::complex<double>(std::cos(phase[j]), std::sin(phase[j]));
    }
    for (int j = 0; j < m; ++j) out.values[j] *= inv_sqrt_m * g_over_w_[j];
    return out;
}

ComplexSketch SketchOperator::sketch_points(const std::vector<Eigen::VectorXd>& xs) const {
    if (xs.empty()) throw std::invalid_argument("sketch_points: empty sample");
    SignedMixture emp;
    emp.centers = xs;
    emp.weights.assign(xs.size(), 1.0 / static_cast<double>(xs.size()));
    // the empirical sketch is the plain feature mean; undo the base smoothing g
    ComplexSketch out;
    const int m = freqs_.count();
    const double inv_sqrt_m = m > 0 ? 1.0 / std::sqrt(static_cast<double>(m)) : 0.0;
    out.values = Eigen::VectorXcd::Zero(m);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const Eigen::VectorXd phase = freqs_.omegas.transpose() * xs[i];
        for (int j = 0; j < m; ++j)
            out.values[j] += std::complex<double>(std::cos(phase[j]), std::sin(phase[j]));
    }
    for (int j = 0; j < m; ++j) {
        const Eigen::VectorXd omega = freqs_.omegas.col(j);
        out.values[j] *= inv_sqrt_m / (freqs_.weight(omega.norm()) * xs.size());
    }
    return out;
}

std::complex<double> sketch_inner(const ComplexSketch& a, const ComplexSketch& b) {
    if (a.values.size() != b.values.size())
        throw std::invalid_argument("sketch_inner: length mismatch");
    std::complex<double> acc(0.0, 0.0);
    for (Eigen::Index j = 0; j < a.values.size(); ++j)
        acc += a.values[j] * std::conj(b.values[j]);
    return acc;
}

double sketch_norm_sq(const ComplexSketch& a) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < a.values.size(); ++j) acc += std::norm(a.values[j]);
    return acc;
}

void export_sketch_csv(const ComplexSketch& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "index,re,im\n";
    for (Eigen::Index j = 0; j < s.values.size(); ++j)
        out << j << "," << fmt17(s.values[j].real()) << "," << fmt17(s.values[j].imag())
            << "\n";
}

} // namespace mixrip
