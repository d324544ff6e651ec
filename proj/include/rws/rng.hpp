#ifndef RWS_RNG_HPP
#define RWS_RNG_HPP

// Counter-based randomness: every variate is a pure function of
// (seed, stream tag, structured coordinates), so fields and experiments are
// reproducible under any evaluation order or thread count.

#include <cstdint>

#include "rws/common.hpp"

namespace rws {

// One splitmix64 step (increment plus finalizer). Statistically strong
// enough for Monte Carlo key hashing; not cryptographic.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Absorbs a sequence of words into a 64-bit key by chained mixing.
class KeyHash {
  public:
    explicit KeyHash(std::uint64_t seed) : h_(mix64(seed)) {}

    KeyHash& absorb(std::uint64_t w) {
        h_ = mix64(h_ ^ w);
        return *this;
    }
    KeyHash& absorb_signed(std::int64_t w) { return absorb(static_cast<std::uint64_t>(w)); }

    std::uint64_t value() const { return h_; }

  private:
    std::uint64_t h_;
};

// Distinct stream tags keep variate families on disjoint key subspaces.
namespace stream {
inline constexpr std::uint64_t template_draw = 0x7e3a1c9b24d06ef1ull;
inline constexpr std::uint64_t gate_draw = 0x41f28c63b5d9a704ull;
inline constexpr std::uint64_t trial_draw = 0xc95d0b8e17a4f263ull;
}  // namespace stream

// Maps 64 random bits to (0,1), symmetric and endpoint-free. The half-offset
// must sit on the 52-bit grid: one level finer and the topmost value would
// round-to-even up to exactly 1.
inline double uniform01(std::uint64_t bits) {
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1p-52;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865476); }

// Inverse of erfc on (0, 2). Closed-form seed (linear near the center, the
// exp(-x^2)/(x sqrt(pi)) asymptote in the tail), then Halley steps on
// f(x) = erfc(x) - y, where f'' = -2x f' collapses the update to
// x - f / (f' + x f).
inline double erfc_inv(double y) {
    if (!(y > 0.0) || !(y < 2.0)) throw input_error("erfc_inv: argument outside (0, 2)");
    if (y == 1.0) return 0.0;
    double sign = 1.0;
    if (y > 1.0) {
        y = 2.0 - y;
        sign = -1.0;
    }
    double x;
    if (y < 0.25) {
        double u = -std::log(y);
        x = std::sqrt(u - 0.5 * std::log(u) - 0.5723649429247001);
    } else {
        x = 0.8862269254527580 * (1.0 - y);
    }
    for (int it = 0; it < 8; ++it) {
        double f = std::erfc(x) - y;
        double fp = -1.1283791670955126 * std::exp(-x * x);
        double step = f / (fp + x * f);
        x -= step;
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
    }
    return sign * x;
}

// Phi^{-1}(u) for u in (0, 1).
inline double normal_quantile(double u) {
    if (!(u > 0.0) || !(u < 1.0)) throw input_error("normal_quantile: argument outside (0, 1)");
    if (u <= 0.5) return -1.4142135623730951 * erfc_inv(2.0 * u);
    return 1.4142135623730951 * erfc_inv(2.0 * (1.0 - u));
}

}  // namespace rws

#endif
