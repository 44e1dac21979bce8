#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "mixrip/frequencies.hpp"
#include "mixrip/kernels.hpp"
#include "mixrip/mixtures.hpp"

namespace mixrip {

struct ComplexSketch {
    Eigen::VectorXcd values;
};

// Sketching operator A over a fixed frequency matrix; entry j of a sketch is
// (1/sqrt(m)) E[e^{i<omega_j, X>}] * g(omega_j) / w(omega_j).
class SketchOperator {
public:
    SketchOperator(const FrequencyMatrix& freqs, const KernelSpec& spec);

    const FrequencyMatrix& freqs() const { return freqs_; }
    const KernelSpec& spec() const { return spec_; }
    // g(omega_j)/w(omega_j) per frequency
    const Eigen::VectorXd& g_over_w() const { return g_over_w_; }

    ComplexSketch sketch_signed_mixture(const SignedMixture& nu) const;
    ComplexSketch sketch_points(const std::vector<Eigen::VectorXd>& xs) const;

private:
    FrequencyMatrix freqs_;
    KernelSpec spec_;
    Eigen::VectorXd g_over_w_;
};

std::complex<double> sketch_inner(const ComplexSketch& a, const ComplexSketch& b);
double sketch_norm_sq(const ComplexSketch& a);

void export_sketch_csv(const ComplexSketch& s, const std::string& path);

} // namespace mixrip
