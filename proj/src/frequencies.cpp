#include "mixrip/frequencies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "mixrip/rng.hpp"
#include "mixrip/util.hpp"

namespace mixrip {

static double spectral_density_radial(const KernelSpec& spec, double r) {
    // spectral density of the data kernel for the Dirac base with identity
    // covariance: N(0, I/s^2) evaluated at radius r
    const double s = spec.scale();
    const int d = spec.dim();
    return std::pow(s * s / (2.0 * M_PI), 0.5 * d) * std::exp(-0.5 * s * s * r * r);
}

static double sphere_surface(int d) {
    return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
}

WeightFunction WeightFunction::flat() {
    WeightFunction w;
    w.kind_ = Kind::Flat;
    return w;
}

double WeightFunction::operator()(double r) const {
    if (kind_ == Kind::Flat) return 1.0;
    if (r <= r_grid_.front()) return w_vals_.front();
    if (r >= r_grid_.back()) return w_vals_.back();
    const auto it = std::upper_bound(r_grid_.begin(), r_grid_.end(), r);
    const std::size_t i = static_cast<std::size_t>(it - r_grid_.begin());
    const double t = (r - r_grid_[i - 1]) / (r_grid_[i] - r_grid_[i - 1]);
    return (1.0 - t) * w_vals_[i - 1] + t * w_vals_[i];
}

WeightFunction WeightFunction::radial(const std::function<double(double)>& w_raw,
                                      const KernelSpec& spec, int table_size) {
    if (spec.base_kind() != BaseKind::Dirac || !spec.identity_sigma())
        throw std::invalid_argument(
            "WeightFunction::radial: only the Dirac base with identity covariance is supported");
    WeightFunction w;
    w.kind_ = Kind::RadialTable;
    const int d = spec.dim();
    const double surf = sphere_surface(d);
    w.r_max_ = (std::sqrt(static_cast<double>(d)) + 12.0) / spec.scale();

    std::vector<double> nodes, weights;
    gauss_legendre(2048, 0.0, w.r_max_, nodes, weights);
    double raw_integral = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double r = nodes[i];
        const double wr = w_raw(r);
        raw_integral += weights[i] * wr * wr * spectral_density_radial(spec, r) * surf *
                        std::pow(r, d - 1);
    }
    if (!(raw_integral > 0.0))
        throw std::invalid_argument("WeightFunction::radial: degenerate weight profile");
    const double c = 1.0 / std::sqrt(raw_integral);

    w.r_grid_.resize(table_size);
    w.w_vals_.resize(table_size);
    for (int i = 0; i < table_size; ++i) {
        const double r = w.r_max_ * i / (table_size - 1.0);
        w.r_grid_[i] = r;
        const double v = c * w_raw(r);
        if (!(v > 0.0))
            throw std::invalid_argument("WeightFunction::radial: weight must be strictly positive");
        w.w_vals_[i] = v;
    }

    // CDF of the radial law of Lambda on the table grid (trapezoid rule)
    w.cdf_.assign(table_size, 0.0);
    auto dens = [&](int i) {
        const double r = w.r_grid_[i];
        return w.w_vals_[i] * w.w_vals_[i] * spectral_density_radial(spec, r) * surf *
               std::pow(r, d - 1);
    };
    for (int i = 1; i < table_size; ++i) {
        const double h = w.r_grid_[i] - w.r_grid_[i - 1];
        w.cdf_[i] = w.cdf_[i - 1] + 0.5 * h * (dens(i) + dens(i - 1));
    }
    const double total = w.cdf_.back();
    for (auto& v : w.cdf_) v /= total;

    // re-check compatibility through the interpolated table
    double check = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double r = nodes[i];
        const double wr = w(r);
        check += weights[i] * wr * wr * spectral_density_radial(spec, r) * surf *
                 std::pow(r, d - 1);
    }
    w.compat_residual_ = std::abs(check - 1.0);
    if (w.compat_residual_ > 1e-3)
        throw std::invalid_argument("WeightFunction::radial: weight is not kappa-compatible");
    return w;
}

double WeightFunction::sample_radius(double u) const {
    if (kind_ != Kind::RadialTable)
        throw std::logic_error("sample_radius: flat weight has no radial table");
    const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.begin()) return r_grid_.front();
    if (it == cdf_.end()) return r_grid_.back();
    const std::size_t i = static_cast<std::size_t>(it - cdf_.begin());
    const double c0 = cdf_[i - 1], c1 = cdf_[i];
    const double t = c1 > c0 ? (u - c0) / (c1 - c0) : 0.0;
    return (1.0 - t) * r_grid_[i - 1] + t * r_grid_[i];
}

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::IID: return "iid";
        case Scheme::OrthoChi: return "orthochi";
        case Scheme::HadamardRademacher: return "hd";
    }
    return "?";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "iid") return Scheme::IID;
    if (name == "orthochi") return Scheme::OrthoChi;
    if (name == "hd") return Scheme::HadamardRademacher;
    throw std::invalid_argument("unknown scheme: " + name);
}

FrequencyMatrix sample_iid(const KernelSpec& spec, const WeightFunction& w, int m,
                           std::uint64_t seed) {
    if (m < 0) throw std::invalid_argument("sample_iid: m must be nonnegative");
    const int d = spec.dim();
    FrequencyMatrix fm;
    fm.omegas.resize(d, m);
    fm.scheme = Scheme::IID;
    fm.block_size = 1;
    fm.weight = w;
    fm.seed = seed;
    for (int j = 0; j < m; ++j) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(j));
        Eigen::VectorXd z(d);
        if (w.kind() == WeightFunction::Kind::Flat) {
            for (int i = 0; i < d; ++i) z[i] = rng.gauss();
            fm.omegas.col(j) = spec.color_frequency(z);
        } else {
            const double r = w.sample_radius(rng.uniform());
            double n = 0.0;
            do {
                for (int i = 0; i < d; ++i) z[i] = rng.gauss();
                n = z.norm();
            } while (!(n > 0.0));
            fm.omegas.col(j) = (r / n) * z;
        }
    }
    return fm;
}

void fwht(double* v, int n) {
    if (n <= 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fwht: length must be a power of two");
    for (int h = 1; h < n; h <<= 1) {
        for (int i = 0; i < n; i += h << 1) {
            for (int j = i; j < i + h; ++j) {
                const double x = v[j];
                const double y = v[j + h];
                v[j] = x + y;
                v[j + h] = x - y;
            }
        }
    }
}

void fwht(Eigen::VectorXd& v) { fwht(v.data(), static_cast<int>(v.size())); }

FrequencyMatrix sample_structured(const KernelSpec& spec, int m, Scheme scheme,
                                  std::uint64_t seed) {
    const int d = spec.dim();
    if (scheme == Scheme::IID)
        throw std::invalid_argument("sample_structured: use sample_iid for the IID scheme");
    if (m % d != 0)
        throw std::invalid_argument("sample_structured: m must be a multiple of d");
    if (scheme == Scheme::HadamardRademacher && (d & (d - 1)) != 0)
        throw std::invalid_argument("sample_structured: d must be a power of two for hd");

    FrequencyMatrix fm;
    fm.omegas.resize(d, m);
    fm.scheme = scheme;
    fm.block_size = d;
    fm.weight = WeightFunction::flat();
    fm.seed = seed;

    const int n_blocks = m / d;
    for (int b = 0; b < n_blocks; ++b) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(b));
        if (scheme == Scheme::OrthoChi) {
            Eigen::MatrixXd g(d, d);
            for (int j = 0; j < d; ++j)
                for (int i = 0; i < d; ++i) g(i, j) = rng.gauss();
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
            Eigen::MatrixXd q = qr.householderQ();
            const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
            for (int j = 0; j < d; ++j)
                if (r(j, j) < 0.0) q.col(j) *= -1.0;
            for (int j = 0; j < d; ++j) {
                const double radius = rng.chi(d);
                fm.omegas.col(b * d + j) = spec.color_frequency(q.col(j) * radius);
            }
        } else {
            Eigen::VectorXd d1(d), d2(d), d3(d);
            for (int i = 0; i < d; ++i) d1[i] = rng.uniform() < 0.5 ? -1.0 : 1.0;
            for (int i = 0; i < d; ++i) d2[i] = rng.uniform() < 0.5 ? -1.0 : 1.0;
            for (int i = 0; i < d; ++i) d3[i] = rng.uniform() < 0.5 ? -1.0 : 1.0;
            for (int j = 0; j < d; ++j) {
                Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
                v[j] = d1[j];
                fwht(v);
                v = v.cwiseProduct(d2);
                fwht(v);
                v = v.cwiseProduct(d3);
                fwht(v);
                v.normalize();
                const double radius = rng.chi(d);
                fm.omegas.col(b * d + j) = spec.color_frequency(v * radius);
            }
        }
    }
    return fm;
}

double legacy_growth_slope(const KernelSpec& spec, const std::function<double(double)>& w) {
    const int n = 240;
    std::vector<double> logs_r, logs_v;
    for (int i = 0; i < n; ++i) {
        const double lr = -2.0 + 8.0 * i / (n - 1.0);  // radii 1e-2 .. 1e6
        const double r = std::pow(10.0, lr);
        double cf = 1.0;
        if (spec.base_kind() == BaseKind::Gaussian) cf = std::exp(-0.5 * r * r);
        double v = (cf / w(r)) * std::max({1.0, r, r * r});
        if (v < 1e-290) v = 1e-290;
        logs_r.push_back(std::log(r));
        logs_v.push_back(std::log(v));
    }
    // least-squares slope over the last decade of the grid
    const int tail = 60;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = n - tail; i < n; ++i) {
        sx += logs_r[i];
        sy += logs_v[i];
        sxx += logs_r[i] * logs_r[i];
        sxy += logs_r[i] * logs_v[i];
    }
    return (tail * sxy - sx * sy) / (tail * sxx - sx * sx);
}

GrowthClass check_legacy_condition(const KernelSpec& spec,
                                   const std::function<double(double)>& w) {
    return legacy_growth_slope(spec, w) > 0.1 ? GrowthClass::Infinite : GrowthClass::Finite;
}

GrowthClass check_legacy_condition(const KernelSpec& spec, const WeightFunction& w) {
    return check_legacy_condition(spec, [&](double r) { return w(r); });
}

void save_frequency_matrix(const FrequencyMatrix& fm, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    const char magic[4] = {'M', 'X', 'R', 'P'};
    out.write(magic, 4);
    const std::uint32_t version = 1;
    const std::uint32_t d = static_cast<std::uint32_t>(fm.dim());
    const std::uint32_t m = static_cast<std::uint32_t>(fm.count());
    const std::uint8_t sch = static_cast<std::uint8_t>(fm.scheme);
    const std::uint64_t seed = fm.seed;
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&d), 4);
    out.write(reinterpret_cast<const char*>(&m), 4);
    out.write(reinterpret_cast<const char*>(&sch), 1);
    out.write(reinterpret_cast<const char*>(&seed), 8);
    out.write(reinterpret_cast<const char*>(fm.omegas.data()),
              static_cast<std::streamsize>(sizeof(double)) * d * m);
    if (!out) throw std::runtime_error("write failed for " + path);
}

FrequencyMatrix load_frequency_matrix(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "MXRP", 4) != 0)
        throw std::runtime_error(path + ": bad magic");
    std::uint32_t version = 0, d = 0, m = 0;
    std::uint8_t sch = 0;
    std::uint64_t seed = 0;
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&d), 4);
    in.read(reinterpret_cast<char*>(&m), 4);
    in.read(reinterpret_cast<char*>(&sch), 1);
    in.read(reinterpret_cast<char*>(&seed), 8);
    if (!in || version != 1) throw std::runtime_error(path + ": unsupported version");
    FrequencyMatrix fm;
    fm.omegas.resize(d, m);
    fm.scheme = static_cast<Scheme>(sch);
    fm.block_size = fm.scheme == Scheme::IID ? 1 : static_cast<int>(d);
    fm.weight = WeightFunction::flat();
    fm.seed = seed;
    in.read(reinterpret_cast<char*>(fm.omegas.data()),
            static_cast<std::streamsize>(sizeof(double)) * d * m);
    if (!in) throw std::runtime_error(path + ": truncated payload");
    return fm;
}

void export_frequency_csv(const FrequencyMatrix& fm, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "index";
    for (int i = 0; i < fm.dim(); ++i) out << ",omega_" << i;
    out << "\n";
    for (int j = 0; j < fm.count(); ++j) {
        out << j;
        for (int i = 0; i < fm.dim(); ++i) out << "," << fmt17(fm.omegas(i, j));
        out << "\n";
    }
}

} // namespace mixrip
