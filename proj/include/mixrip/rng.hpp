#pragma once

#include <cstdint>
#include <cmath>
#include <vector>

namespace mixrip {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ generator seeded via splitmix64. Self-contained so that all
// sampled streams are bit-identical across platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& si : s_) si = splitmix64(sm);
        has_spare_ = false;
        spare_ = 0.0;
    }

    // Derive an independent substream from (seed, index); used to make
    // parallel and serial Monte-Carlo runs agree.
    static Rng stream(std::uint64_t seed, std::uint64_t index) {
        std::uint64_t sm = seed;
        std::uint64_t a = splitmix64(sm);
        sm = a ^ (0x632be59bd9b4e019ULL + index * 0x9e3779b97f4a7c15ULL);
        std::uint64_t derived = splitmix64(sm) ^ splitmix64(sm);
        return Rng(derived);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0,1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Standard normal via Box-Muller with a cached spare.
    double gauss() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1, u2;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    // Gamma(shape, scale=1) via Marsaglia-Tsang squeeze.
    double gamma(double shape) {
        if (shape < 1.0) {
            const double u = std::max(uniform(), 1e-300);
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = gauss();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    double chi_squared(double dof) { return 2.0 * gamma(0.5 * dof); }

    // chi_d distributed radius (norm of a d-dimensional standard Gaussian).
    double chi(int d) { return std::sqrt(chi_squared(static_cast<double>(d))); }

    // Symmetric Dirichlet(1): uniform on the probability simplex.
    void dirichlet_uniform(std::vector<double>& w) {
        double sum = 0.0;
        for (auto& wi : w) {
            double e;
            do {
                e = -std::log(1.0 - uniform());
            } while (!(e > 0.0));
            wi = e;
            sum += e;
        }
        for (auto& wi : w) wi /= sum;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
    double spare_;
    bool has_spare_;
};

} // namespace mixrip
