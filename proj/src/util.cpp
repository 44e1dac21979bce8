#include "mixrip/util.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

namespace mixrip {

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

static const int kHaltonPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31,
                                    37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79,
                                    83, 89, 97, 101, 103, 107, 109, 113, 127, 131};

std::vector<double> halton_point(std::uint64_t index, int dim) {
    if (dim > static_cast<int>(sizeof(kHaltonPrimes) / sizeof(int)))
        throw std::invalid_argument("halton_point: dimension too large");
    std::vector<double> p(dim);
    for (int c = 0; c < dim; ++c) {
        const std::uint64_t base = kHaltonPrimes[c];
        double f = 1.0, r = 0.0;
        std::uint64_t i = index;
        while (i > 0) {
            f /= static_cast<double>(base);
            r += f * static_cast<double>(i % base);
            i /= base;
        }
        p[c] = r;
    }
    return p;
}

double norminv(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("norminv: p outside (0,1)");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1.0 - plow;
    double q, r;
    if (p < plow) {
        q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > phigh) {
        q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    q = p - 0.5;
    r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double golden_section_max(const std::function<double(double)>& f, double a, double b,
                          double tol, double* arg) {
    const double gr = 0.6180339887498949;
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        }
    }
    const double xm = 0.5 * (a + b);
    if (arg) *arg = xm;
    return f(xm);
}

double nelder_mead_min(const std::function<double(const std::vector<double>&)>& f,
                       std::vector<double>& x, double step, int max_iter) {
    const std::size_t n = x.size();
    std::vector<std::vector<double>> simplex(n + 1, x);
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step;
    for (std::size_t i = 0; i <= n; ++i) fv[i] = f(simplex[i]);

    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    for (int it = 0; it < max_iter; ++it) {
        // order: 0 best, n worst
        std::vector<std::size_t> idx(n + 1);
        for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        std::vector<std::vector<double>> s2(n + 1);
        std::vector<double> f2(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            s2[i] = simplex[idx[i]];
            f2[i] = fv[idx[i]];
        }
        simplex.swap(s2);
        fv.swap(f2);

        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += simplex[i][j];
            centroid[j] = s / static_cast<double>(n);
        }
        for (std::size_t j = 0; j < n; ++j) xr[j] = centroid[j] + (centroid[j] - simplex[n][j]);
        const double fr = f(xr);
        if (fr < fv[0]) {
            for (std::size_t j = 0; j < n; ++j) xe[j] = centroid[j] + 2.0 * (centroid[j] - simplex[n][j]);
            const double fe = f(xe);
            if (fe < fr) {
                simplex[n] = xe;
                fv[n] = fe;
            } else {
                simplex[n] = xr;
                fv[n] = fr;
            }
        } else if (fr < fv[n - 1]) {
            simplex[n] = xr;
            fv[n] = fr;
        } else {
            for (std::size_t j = 0; j < n; ++j) xc[j] = centroid[j] + 0.5 * (simplex[n][j] - centroid[j]);
            const double fc = f(xc);
            if (fc < fv[n]) {
                simplex[n] = xc;
                fv[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 0; j < n; ++j)
                        simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
                    fv[i] = f(simplex[i]);
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i)
        if (fv[i] < fv[best]) best = i;
    x = simplex[best];
    return fv[best];
}

void gauss_legendre(int n, double a, double b,
                    std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(n);
    weights.resize(n);
    const int m = (n + 1) / 2;
    const double xm = 0.5 * (b + a), xl = 0.5 * (b - a);
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        nodes[i] = xm - xl * z;
        nodes[n - 1 - i] = xm + xl * z;
        weights[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
        weights[n - 1 - i] = weights[i];
    }
}

double ks_critical(std::size_t n, double alpha) {
    const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    return c / std::sqrt(static_cast<double>(n));
}

static std::atomic<int> g_default_threads{0};

int default_threads() {
    int t = g_default_threads.load();
    if (t > 0) return t;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

void set_default_threads(int n) { g_default_threads.store(n); }

void parallel_for(std::size_t n, int n_threads, const std::function<void(std::size_t)>& fn) {
    if (n_threads <= 0) n_threads = default_threads();
    if (n_threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) break;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const int used = std::min<std::size_t>(n, static_cast<std::size_t>(n_threads));
    pool.reserve(used);
    for (int t = 0; t < used; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

} // namespace mixrip
