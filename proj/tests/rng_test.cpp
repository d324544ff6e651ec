#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "rws/rng.hpp"

using namespace rws;

namespace {

// Reference generator (Vigna's splitmix64), written out independently so the
// key mixer can be checked against the published sequence.
struct SplitMix64 {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

}  // namespace

TEST_CASE("mix64 is one splitmix64 step") {
    // Sequence from state 0: published first value, then the whole stream.
    REQUIRE(mix64(0) == 0xE220A8397B1DCDAFull);
    SplitMix64 ref{0};
    const std::uint64_t gamma = 0x9E3779B97F4A7C15ull;
    for (std::uint64_t i = 0; i < 100; ++i) REQUIRE(mix64(i * gamma) == ref.next());
}

TEST_CASE("key hash determinism and sensitivity") {
    KeyHash a(42), b(42);
    a.absorb(1).absorb(2);
    b.absorb(1).absorb(2);
    REQUIRE(a.value() == b.value());

    KeyHash c(42);
    c.absorb(2).absorb(1);  // order matters
    REQUIRE(c.value() != a.value());
    REQUIRE(KeyHash(43).absorb(1).absorb(2).value() != a.value());

    // signed absorption is injective over small magnitudes
    std::set<std::uint64_t> keys;
    for (std::int64_t w = -100; w <= 100; ++w)
        REQUIRE(keys.insert(KeyHash(7).absorb_signed(w).value()).second);
}

TEST_CASE("stream tags are distinct") {
    REQUIRE(stream::template_draw != stream::gate_draw);
    REQUIRE(stream::template_draw != stream::trial_draw);
    REQUIRE(stream::gate_draw != stream::trial_draw);
}

TEST_CASE("uniform01 stays strictly inside the unit interval") {
    for (std::uint64_t bits : {std::uint64_t{0}, ~std::uint64_t{0}, std::uint64_t{1} << 63,
                               mix64(123), mix64(456)}) {
        double u = uniform01(bits);
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
    }
    // extremes of the 52-bit grid
    REQUIRE(uniform01(0) == 0x1p-53);
    REQUIRE(uniform01(~std::uint64_t{0}) == 1.0 - 0x1p-53);
}

TEST_CASE("keyed uniforms have the right first two moments") {
    const int n = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        double u = uniform01(mix64(std::uint64_t(i) * 0x9E3779B97F4A7C15ull + 17));
        sum += u;
        sumsq += u * u;
    }
    double mean = sum / n;
    double var = sumsq / n - mean * mean;
    // SE(mean) = sqrt(1/12n); SE(var) for the uniform is about 0.00024
    REQUIRE(std::abs(mean - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / n));
    REQUIRE(std::abs(var - 1.0 / 12.0) < 5.0 * 0.00024);
}

TEST_CASE("erfc_inv inverts erfc") {
    for (double y : {1e-12, 1e-6, 0.01, 0.3, 0.7, 1.0, 1.3, 1.9, 1.999, 2.0 - 1e-12}) {
        double x = erfc_inv(y);
        REQUIRE(std::erfc(x) == Catch::Approx(y).epsilon(1e-12));
    }
    REQUIRE(erfc_inv(1.0) == 0.0);
    REQUIRE(erfc_inv(0.5) == Catch::Approx(-erfc_inv(1.5)).margin(1e-15));
    REQUIRE_THROWS_AS(erfc_inv(0.0), input_error);
    REQUIRE_THROWS_AS(erfc_inv(2.0), input_error);
    REQUIRE_THROWS_AS(erfc_inv(-0.5), input_error);
}

TEST_CASE("normal quantile: frozen reference values") {
    // Classical two-sided 95% and one-sided 99% points.
    CHECK(normal_quantile(0.975) == Catch::Approx(1.959963984540054).margin(1e-12));
    CHECK(normal_quantile(0.99) == Catch::Approx(2.3263478740408408).margin(1e-12));
    CHECK(normal_quantile(0.5) == Catch::Approx(0.0).margin(1e-15));
    CHECK(normal_quantile(0.025) == Catch::Approx(-1.959963984540054).margin(1e-12));
}

TEST_CASE("normal quantile and cdf are mutually inverse") {
    for (double u = 0.01; u < 1.0; u += 0.007)
        REQUIRE(normal_cdf(normal_quantile(u)) == Catch::Approx(u).margin(1e-12));
    // The right tail loses bits in 1 - cdf(x), hence the asymmetric margin.
    for (double x = -6.0; x <= 6.0; x += 0.37)
        REQUIRE(normal_quantile(normal_cdf(x)) ==
                Catch::Approx(x).margin(x < 3.0 ? 1e-9 : 1e-7));
    // deep tails still finite and monotone
    REQUIRE(normal_quantile(1e-15) < normal_quantile(1e-12));
    REQUIRE(std::isfinite(normal_quantile(1e-15)));
    REQUIRE_THROWS_AS(normal_quantile(0.0), input_error);
    REQUIRE_THROWS_AS(normal_quantile(1.0), input_error);
}

TEST_CASE("inverse-cdf gaussians: sample moments") {
    const int n = 100000;
    double sum = 0.0, sumsq = 0.0, sum4 = 0.0;
    for (int i = 0; i < n; ++i) {
        double g = normal_quantile(uniform01(KeyHash(99).absorb(std::uint64_t(i)).value()));
        sum += g;
        sumsq += g * g;
        sum4 += g * g * g * g;
    }
    double mean = sum / n;
    double var = sumsq / n;
    double kurt = sum4 / n;
    REQUIRE(std::abs(mean) < 5.0 / std::sqrt(double(n)));          // SE = 1/sqrt(n)
    REQUIRE(std::abs(var - 1.0) < 5.0 * std::sqrt(2.0 / n));       // Var(X^2) = 2
    REQUIRE(std::abs(kurt - 3.0) < 5.0 * std::sqrt(96.0 / n));     // Var(X^4) = 96
}
