#include "sddf/core/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace sddf {

namespace {
inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
} // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cell, std::uint64_t rep) {
    std::uint64_t s = master;
    std::uint64_t a = splitmix64(s);
    s = a ^ (0x9e3779b97f4a7c15ULL * (cell + 1));
    std::uint64_t b = splitmix64(s);
    s = b ^ (0xbf58476d1ce4e5b9ULL * (rep + 1));
    return splitmix64(s);
}

Rng::Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
}

std::uint64_t Rng::next_u64() {
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

double Rng::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double mul = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * mul;
    have_spare_ = true;
    return u * mul;
}

double Rng::normal(double mean, double sd) { return mean + sd * normal(); }

double Rng::gamma(double shape, double scale) {
    if (shape <= 0.0 || scale <= 0.0) throw std::invalid_argument("gamma: parameters must be positive");
    if (shape < 1.0) {
        const double u = uniform01();
        return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform01();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
    }
}

double Rng::truncated_normal(double mean, double sd, double lo, double hi) {
    if (lo >= hi) throw std::invalid_argument("truncated_normal: empty window");
    for (int i = 0; i < 1000000; ++i) {
        const double x = normal(mean, sd);
        if (x >= lo && x <= hi) return x;
    }
    throw std::runtime_error("truncated_normal: acceptance region too unlikely");
}

double Rng::truncated_gamma(double shape, double scale, double lo, double hi) {
    if (lo >= hi) throw std::invalid_argument("truncated_gamma: empty window");
    for (int i = 0; i < 1000000; ++i) {
        const double x = gamma(shape, scale);
        if (x >= lo && x <= hi) return x;
    }
    throw std::runtime_error("truncated_gamma: acceptance region too unlikely");
}

} // namespace sddf
