#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "rws/conditions.hpp"
#include "rws/rng.hpp"

using namespace rws;

namespace {

PriorSpec dense(double alpha, double beta, double gamma, double theta) {
    PriorSpec p;
    p.alpha = alpha;
    p.beta = beta;
    p.gamma = gamma;
    p.theta = theta;
    return p;
}

PriorSpec gated(double alpha, double beta, double gamma, double mu, double nu) {
    PriorSpec p;
    p.family = PriorFamily::BernoulliBesov;
    p.alpha = alpha;
    p.beta = beta;
    p.gamma = gamma;
    p.mu = mu;
    p.nu = nu;
    return p;
}

// Plain floating-point restatements of the predicates. All fuzz grids below
// are dyadic, so every comparison here is decided exactly in doubles and the
// oracle needs no equality band.
bool oracle_a(int d, double s, double p, double q, double al, double be, double ga, double th) {
    bool pinf = std::isinf(p), qinf = std::isinf(q);
    bool c1 = pinf ? ga <= 0.0 : ga + d / p < 0.0;
    bool c2 = pinf ? be <= 0.0 : be + d / p < 0.0;
    double core = s + 0.5 * d + al;
    bool tail = qinf ? th <= 0.0 : th + 1.0 / q < 0.0;
    return c1 && c2 && (core < 0.0 || (core == 0.0 && tail));
}

bool oracle_a_prime(int d, double s, double p, double q, double al, double be, double ga,
                    double mu, double nu) {
    bool pinf = std::isinf(p), qinf = std::isinf(q);
    double core = s + 0.5 * d + al;
    if (pinf) {
        bool third = qinf ? core <= 0.0 : core < 0.0;
        return ga <= 0.0 && be <= 0.0 && third;
    }
    double shift = (d + nu) / p;
    double c3 = core + mu / p;
    bool third = qinf ? c3 <= 0.0 : c3 < 0.0;
    return ga + shift < 0.0 && be + shift < 0.0 && third;
}

bool oracle_a_dprime(int d, double s, double p, double al, double be, double ga, double mu,
                     double nu, double r) {
    double core = s + 0.5 * d + al;
    if (std::isinf(p)) return ga <= 0.0 && be <= 0.0 && core <= 0.0;
    double mrp = std::max(r, p);
    return ga + d / p + nu / mrp < 0.0 && be + d / p + nu / mrp < 0.0 && core + mu / mrp < 0.0;
}

bool oracle_b(int d, double s, double p, int k) {
    if (!std::isinf(p) && p < 1.0) return double(k) > s && double(k) > d * (1.0 / p - 1.0) - s;
    return double(k) > std::abs(s);
}

bool oracle_b_prime(int d, double p, double al, int k) {
    double half = 0.5 * d + al;
    if (!std::isinf(p) && p < 1.0) return double(k) > d * (1.0 / p - 1.0) + half;
    return double(k) > half;
}

template <typename T>
T pick(std::uint64_t& state, const std::vector<T>& from) {
    state = mix64(state);
    return from[state % from.size()];
}

}  // namespace

TEST_CASE("rational promotion") {
    using detail::to_rational;
    auto r = to_rational(0.5);
    REQUIRE(r.has_value());
    REQUIRE(r->num == 1);
    REQUIRE(r->den == 2);
    r = to_rational(1.0 / 3.0);
    REQUIRE(r.has_value());
    REQUIRE(r->num == 1);
    REQUIRE(r->den == 3);
    r = to_rational(-2.0);
    REQUIRE(r.has_value());
    REQUIRE(r->num == -2);
    REQUIRE(r->den == 1);
    r = to_rational(1.0 / 8192.0);
    REQUIRE(r.has_value());
    REQUIRE(r->den == 8192);
    REQUIRE_FALSE(to_rational(0.12345678901).has_value());  // denominator cap
    REQUIRE_FALSE(to_rational(2e9).has_value());
    REQUIRE_FALSE(to_rational(inf).has_value());
}

TEST_CASE("regularity of the dense family: worked cases") {
    SECTION("strict branch") {
        SpaceSpec spec{1, 0.0, 2.0, 2.0, 0.0};
        PropertyVerdict v = property_a(spec, dense(-1.0, -1.0, -1.0, 0.0));
        REQUIRE(v.holds);
        REQUIRE(v.branch == "A-strict");
        REQUIRE(v.margins.size() == 3);
        REQUIRE(v.margins[2].name == "s + d/2 + alpha");
        REQUIRE(v.margins[2].slack == -0.5);
        for (const auto& m : v.margins) {
            REQUIRE(m.satisfied);
            REQUIRE(m.exact);
        }
        REQUIRE(v.render() ==
                "branch: A-strict\n"
                "holds: yes\n"
                "gamma + d/p < 0: slack -0.5 ok (exact)\n"
                "beta + d/p < 0: slack -0.5 ok (exact)\n"
                "s + d/2 + alpha < 0: slack -0.5 ok (exact)\n");
    }

    SECTION("boundary branch needs the logarithmic correction") {
        SpaceSpec spec{1, -0.5, 2.0, 2.0, 0.0};
        PropertyVerdict v = property_a(spec, dense(0.0, -1.0, -1.0, -1.0));
        REQUIRE(v.holds);
        REQUIRE(v.branch == "A-boundary");
        REQUIRE(v.margins.size() == 4);
        REQUIRE(v.margins[2].rel == Relation::EqualZero);
        REQUIRE(v.margins[2].slack == 0.0);
        REQUIRE(v.margins[3].name == "theta + 1/q");
        REQUIRE(v.margins[3].slack == -0.5);

        // same point without the correction fails
        PropertyVerdict w = property_a(spec, dense(0.0, -1.0, -1.0, 0.0));
        REQUIRE_FALSE(w.holds);
        REQUIRE(w.branch == "none");
    }

    SECTION("sup-norm replacement makes the shift conditions non-strict") {
        SpaceSpec spec{1, 0.0, inf, 2.0, 0.0};
        PropertyVerdict v = property_a(spec, dense(-1.0, 0.1, 0.0, 0.0));
        REQUIRE_FALSE(v.holds);
        bool beta_flagged = false;
        for (const auto& m : v.margins)
            if (m.name == "beta") {
                beta_flagged = true;
                REQUIRE(m.rel == Relation::AtMostZero);
                REQUIRE_FALSE(m.satisfied);
                REQUIRE(m.slack == 0.1);
            }
        REQUIRE(beta_flagged);

        // beta on the closure boundary passes
        REQUIRE(property_a(spec, dense(-1.0, 0.0, 0.0, 0.0)).holds);
    }

    SECTION("family guard") {
        SpaceSpec spec{1, 0.0, 2.0, 2.0, 0.0};
        REQUIRE_THROWS_AS(property_a(spec, gated(-1, -1, -1, 0, 0)), input_error);
    }
}

TEST_CASE("regularity of the gated family: worked cases") {
    SECTION("both exponents finite") {
        SpaceSpec spec{1, 0.0, 2.0, 2.0, 0.0};
        PropertyVerdict v = property_a_prime(spec, gated(-0.1, -0.3, -0.3, -1.0, -1.0));
        REQUIRE(v.holds);
        REQUIRE(v.branch == "A'-(a)");
        REQUIRE(v.margins[0].slack == Catch::Approx(-0.3).margin(1e-15));
        REQUIRE(v.margins[2].name == "s + d/2 + alpha + mu/p");
        REQUIRE(v.margins[2].slack == Catch::Approx(-0.1).margin(1e-15));
    }

    SECTION("q = inf relaxes the scale condition to its closure") {
        SpaceSpec spec{1, 0.0, 2.0, inf, 0.0};
        PropertyVerdict v = property_a_prime(spec, gated(0.0, -0.3, -0.3, -1.0, -1.0));
        REQUIRE(v.holds);
        REQUIRE(v.branch == "A'-(b)");
        REQUIRE(v.margins[2].rel == Relation::AtMostZero);
        REQUIRE(v.margins[2].slack == 0.0);
    }

    SECTION("both infinite") {
        SpaceSpec spec{1, -0.5, inf, inf, 0.0};
        PropertyVerdict v = property_a_prime(spec, gated(0.0, 0.0, 0.0, -1.0, -1.0));
        REQUIRE(v.holds);
        REQUIRE(v.branch == "A'-(d)");
        for (const auto& m : v.margins) {
            REQUIRE(m.rel == Relation::AtMostZero);
            REQUIRE(m.slack == 0.0);
        }
    }

    SECTION("family guard") {
        SpaceSpec spec{1, 0.0, 2.0, 2.0, 0.0};
        REQUIRE_THROWS_AS(property_a_prime(spec, dense(-1, -1, -1, 0)), input_error);
    }
}

TEST_CASE("gated family with moment damping: worked cases") {
    SpaceSpec spec{1, 0.0, 2.0, 2.0, 0.0};
    PriorSpec g = gated(-0.1, -1.0, -1.0, -1.0, 0.0);  // s + d/2 + alpha = 0.4

    SECTION("r = p keeps the full gate discount") {
        PropertyVerdict v = property_a_dprime(spec, g, 2.0);
        REQUIRE(v.holds);
        REQUIRE(v.branch == "A''-(a)");
        REQUIRE(v.margins[2].slack == Catch::Approx(-0.1).margin(1e-15));
    }

    SECTION("larger r weakens the discount below usefulness") {
        PropertyVerdict v = property_a_dprime(spec, g, 4.0);
        REQUIRE_FALSE(v.holds);
        REQUIRE(v.branch == "none");
        REQUIRE(v.margins[2].slack == Catch::Approx(0.15).margin(1e-15));
    }

    SECTION("sup-norm clause") {
        SpaceSpec sup{1, -0.5, inf, 2.0, 0.0};
        PropertyVerdict v = property_a_dprime(sup, gated(0.0, 0.0, 0.0, -1.0, 0.0), 2.0);
        REQUIRE(v.holds);
        REQUIRE(v.branch == "A''-(b)");
    }

    SECTION("guards") {
        REQUIRE_THROWS_AS(property_a_dprime(spec, g, 0.0), input_error);
        REQUIRE_THROWS_AS(property_a_dprime(spec, g, -1.0), input_error);
        REQUIRE_THROWS_AS(property_a_dprime(spec, dense(0, 0, 0, 0), 2.0), input_error);
    }
}

TEST_CASE("wavelet order conditions: worked cases") {
    SECTION("order against smoothness") {
        REQUIRE(property_b(SpaceSpec{1, 1.5, 2.0, 2.0, 0.0}, 2).holds);
        REQUIRE(property_b(SpaceSpec{1, 1.5, 2.0, 2.0, 0.0}, 2).branch == "B-(b)");
        PropertyVerdict v = property_b(SpaceSpec{1, 0.0, 0.5, 2.0, 0.0}, 1);
        REQUIRE_FALSE(v.holds);  // k > d(1/p - 1) - s = 1 fails at k = 1
        REQUIRE(v.margins[1].slack == 0.0);
        REQUIRE(property_b(SpaceSpec{1, 0.0, 0.5, 2.0, 0.0}, 2).holds);
        REQUIRE(property_b(SpaceSpec{1, 0.0, 0.5, 2.0, 0.0}, 2).branch == "B-(a)");
        REQUIRE_THROWS_AS(property_b(SpaceSpec{1, 0.0, 2.0, 2.0, 0.0}, 0), input_error);
    }

    SECTION("order against the prior scale exponent") {
        PropertyVerdict v = property_b_prime(1, 2.0, -0.5, 1);
        REQUIRE(v.holds);
        REQUIRE(v.branch == "B'-(b)");
        REQUIRE(v.margins[0].slack == -1.0);
        REQUIRE_THROWS_AS(property_b_prime(0, 2.0, 0.0, 1), input_error);
        REQUIRE_THROWS_AS(property_b_prime(1, 0.0, 0.0, 1), input_error);
        REQUIRE_THROWS_AS(property_b_prime(1, 2.0, 0.0, 0), input_error);
    }

    SECTION("minimal admissible order") {
        REQUIRE(min_k(SpaceSpec{1, 0.5, 2.0, 2.0, 0.0}, -0.5) == 1);
        REQUIRE(min_k(SpaceSpec{1, 3.5, 2.0, 2.0, 0.0}, -0.5) == 4);
        REQUIRE(min_k(SpaceSpec{2, 0.0, 0.5, 2.0, 0.0}, 0.0) == 4);
        for (double s : {-2.3, 0.0, 1.25}) {
            SpaceSpec spec{2, s, 0.75, 2.0, 0.0};
            int k = min_k(spec, -0.4);
            REQUIRE(property_b(spec, k).holds);
            REQUIRE(property_b_prime(2, 0.75, -0.4, k).holds);
            if (k > 1) {
                bool prev = property_b(spec, k - 1).holds &&
                            property_b_prime(2, 0.75, -0.4, k - 1).holds;
                REQUIRE_FALSE(prev);
            }
        }
    }
}

TEST_CASE("predicates agree with a direct floating-point oracle") {
    const std::vector<double> svals = {-1.5, -1.0, -0.5, 0.0, 0.5};
    const std::vector<double> pvals = {0.5, 1.0, 2.0, 4.0, inf};
    const std::vector<double> qvals = {1.0, 2.0, inf};
    const std::vector<double> evals = {-2.0, -0.75, -0.5, 0.0, 0.25};
    const std::vector<double> gvals = {-2.0, -1.0, -0.5, 0.0};
    const std::vector<double> rvals = {0.5, 1.0, 2.0, 4.0};
    const std::vector<int> dvals = {1, 2};
    const std::vector<int> kvals = {1, 2, 3};

    std::uint64_t st = 2026;
    for (int trial = 0; trial < 500; ++trial) {
        int d = pick(st, dvals);
        double s = pick(st, svals), p = pick(st, pvals), q = pick(st, qvals);
        double al = pick(st, evals), be = pick(st, evals), ga = pick(st, evals);
        double th = pick(st, gvals), mu = pick(st, gvals), nu = pick(st, gvals);
        double r = pick(st, rvals);
        int k = pick(st, kvals);
        SpaceSpec spec{d, s, p, q, 0.0};

        CAPTURE(d, s, p, q, al, be, ga, th, mu, nu, r, k);
        PropertyVerdict va = property_a(spec, dense(al, be, ga, th));
        REQUIRE(va.holds == oracle_a(d, s, p, q, al, be, ga, th));
        REQUIRE(va.holds == (va.branch != "none"));
        if (va.holds)
            for (const auto& m : va.margins) REQUIRE(m.satisfied);

        PropertyVerdict vp = property_a_prime(spec, gated(al, be, ga, mu, nu));
        REQUIRE(vp.holds == oracle_a_prime(d, s, p, q, al, be, ga, mu, nu));
        if (vp.holds) {
            bool pinf = std::isinf(p), qinf = std::isinf(q);
            std::string want = pinf ? (qinf ? "A'-(d)" : "A'-(c)") : (qinf ? "A'-(b)" : "A'-(a)");
            REQUIRE(vp.branch == want);
        }

        PropertyVerdict vd = property_a_dprime(spec, gated(al, be, ga, mu, nu), r);
        REQUIRE(vd.holds == oracle_a_dprime(d, s, p, al, be, ga, mu, nu, r));

        PropertyVerdict vb = property_b(spec, k);
        REQUIRE(vb.holds == oracle_b(d, s, p, k));
        PropertyVerdict vbp = property_b_prime(d, p, al, k);
        REQUIRE(vbp.holds == oracle_b_prime(d, p, al, k));
    }
}

TEST_CASE("large finite p and q approximate the sup-norm rules") {
    // Away from the closure boundary (all slacks at least 0.01), replacing
    // p = inf by p = 10^6 must not change any verdict.
    const double big = 1e6;
    struct Tuple {
        double s, al, be, ga, th;
    };
    std::vector<Tuple> tuples = {
        {0.0, -1.0, -0.5, -0.5, -0.5}, {0.0, -1.0, 0.3, -0.5, -0.5},
        {0.0, -0.4, -0.2, -0.2, -1.0}, {1.0, -2.0, -0.03, -0.03, 0.5},
        {-0.5, -0.1, -1.0, -1.0, 0.4},
    };
    for (const Tuple& t : tuples) {
        PropertyVerdict vinf = property_a(SpaceSpec{1, t.s, inf, 2.0, 0.0},
                                          dense(t.al, t.be, t.ga, t.th));
        PropertyVerdict vbig = property_a(SpaceSpec{1, t.s, big, 2.0, 0.0},
                                          dense(t.al, t.be, t.ga, t.th));
        REQUIRE(vinf.holds == vbig.holds);

        PropertyVerdict winf = property_a(SpaceSpec{1, t.s, 2.0, inf, 0.0},
                                          dense(t.al, t.be, t.ga, t.th));
        PropertyVerdict wbig = property_a(SpaceSpec{1, t.s, 2.0, big, 0.0},
                                          dense(t.al, t.be, t.ga, t.th));
        REQUIRE(winf.holds == wbig.holds);

        PropertyVerdict ginf = property_a_prime(SpaceSpec{1, t.s, inf, 2.0, 0.0},
                                                gated(t.al, t.be, t.ga, -1.0, -0.5));
        PropertyVerdict gbig = property_a_prime(SpaceSpec{1, t.s, big, 2.0, 0.0},
                                                gated(t.al, t.be, t.ga, -1.0, -0.5));
        REQUIRE(ginf.holds == gbig.holds);
    }
}

TEST_CASE("floating fallback uses the equality band") {
    // s is microscopically off the boundary and not recognizably rational,
    // so the equality test falls back to the 1e-12 band and reports approx.
    SpaceSpec spec{1, 1e-13, 2.0, 2.0, 0.0};
    PropertyVerdict v = property_a(spec, dense(-0.5, -1.0, -1.0, -1.0));
    REQUIRE(v.holds);
    REQUIRE(v.branch == "A-boundary");
    REQUIRE_FALSE(v.margins[2].exact);
    REQUIRE(v.render().find("(approx)") != std::string::npos);

    // well away from the boundary the band is irrelevant
    SpaceSpec clear{1, 0.12345678901, 2.0, 2.0, 0.0};
    PropertyVerdict w = property_a(clear, dense(-1.0, -1.0, -1.0, 0.0));
    REQUIRE(w.holds);
    REQUIRE(w.branch == "A-strict");
    REQUIRE_FALSE(w.margins[2].exact);
}
