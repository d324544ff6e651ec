#ifndef RWS_CONDITIONS_HPP
#define RWS_CONDITIONS_HPP

// Regularity predicates on the parameter tuple (s, p, q, d, alpha, beta,
// gamma, theta, mu, nu, r, k): Properties A, A', A'' and the wavelet-order
// conditions B, B', with all p = inf / q = inf replacement rules. Verdicts
// are decided in exact rational arithmetic whenever every input is
// recognizably rational; otherwise a 1e-12 band decides equalities, and the
// margins are flagged as approximate.

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "rws/common.hpp"
#include "rws/io.hpp"
#include "rws/priors.hpp"
#include "rws/seqspace.hpp"

namespace rws {

namespace detail {

struct Rat {
    long long num = 0;
    long long den = 1;
};

inline std::optional<Rat> rat_norm(long long num, long long den) {
    if (den == 0) return std::nullopt;
    if (den < 0) {
        if (num == std::numeric_limits<long long>::min() ||
            den == std::numeric_limits<long long>::min())
            return std::nullopt;
        num = -num;
        den = -den;
    }
    long long g = std::gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return Rat{num, den};
}

inline std::optional<Rat> rat_add(Rat a, Rat b) {
    long long x, y, d;
    if (__builtin_mul_overflow(a.num, b.den, &x) || __builtin_mul_overflow(b.num, a.den, &y) ||
        __builtin_add_overflow(x, y, &x) || __builtin_mul_overflow(a.den, b.den, &d))
        return std::nullopt;
    return rat_norm(x, d);
}

inline std::optional<Rat> rat_mul(Rat a, Rat b) {
    long long n, d;
    if (__builtin_mul_overflow(a.num, b.num, &n) || __builtin_mul_overflow(a.den, b.den, &d))
        return std::nullopt;
    return rat_norm(n, d);
}

inline std::optional<Rat> rat_div(Rat a, Rat b) {
    if (b.num == 0) return std::nullopt;
    return rat_mul(a, Rat{b.den, b.num});
}

// Continued-fraction promotion: accept p/q with q <= 10^4 when it matches x
// to within 4 ulp. Decimal CLI inputs and designed experiments promote;
// arbitrary reals fall through to the floating path.
inline std::optional<Rat> to_rational(double x) {
    if (!std::isfinite(x) || std::abs(x) > 1e9) return std::nullopt;
    long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;  // k-2 and k-1 convergents
    double rem = x;
    for (int it = 0; it < 30; ++it) {
        double fl = std::floor(rem);
        long long a = static_cast<long long>(fl);
        long long p2, q2;
        if (__builtin_mul_overflow(a, p1, &p2) || __builtin_add_overflow(p2, p0, &p2) ||
            __builtin_mul_overflow(a, q1, &q2) || __builtin_add_overflow(q2, q0, &q2))
            return std::nullopt;
        if (q2 > 10000) return std::nullopt;
        if (std::abs(x - double(p2) / double(q2)) <=
            4.0 * std::abs(x) * std::numeric_limits<double>::epsilon())
            return rat_norm(p2, q2);
        double frac = rem - fl;
        if (frac < 1e-12) return std::nullopt;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        rem = 1.0 / frac;
    }
    return std::nullopt;
}

// A real that remembers an exact rational form when one is available.
// Arithmetic stays exact until an operand is inexact or an op overflows.
class Scalar {
  public:
    static Scalar from(double x) {
        Scalar s;
        s.approx_ = x;
        if (auto r = to_rational(x)) {
            s.exact_ = true;
            s.rat_ = *r;
        }
        return s;
    }
    static Scalar integer(long long n) {
        Scalar s;
        s.approx_ = double(n);
        s.exact_ = true;
        s.rat_ = Rat{n, 1};
        return s;
    }

    double value() const { return approx_; }
    bool exact() const { return exact_; }

    Scalar plus(const Scalar& o) const { return combine(o, approx_ + o.approx_, rat_add); }
    Scalar minus(const Scalar& o) const { return plus(o.times(Scalar::integer(-1))); }
    Scalar times(const Scalar& o) const { return combine(o, approx_ * o.approx_, rat_mul); }
    Scalar over(const Scalar& o) const { return combine(o, approx_ / o.approx_, rat_div); }

    // -1 / 0 / +1; the zero band applies only on the floating path.
    int sign(double band = 1e-12) const {
        if (exact_) return (rat_.num > 0) - (rat_.num < 0);
        if (std::abs(approx_) <= band) return 0;
        return approx_ > 0 ? 1 : -1;
    }

  private:
    template <typename Op>
    Scalar combine(const Scalar& o, double approx, Op op) const {
        Scalar r;
        r.approx_ = approx;
        if (exact_ && o.exact_) {
            if (auto v = op(rat_, o.rat_)) {
                r.exact_ = true;
                r.rat_ = *v;
            }
        }
        return r;
    }

    bool exact_ = false;
    Rat rat_{0, 1};
    double approx_ = 0.0;
};

}  // namespace detail

enum class Relation { LessThanZero, AtMostZero, EqualZero };

struct InequalityMargin {
    std::string name;
    Relation rel = Relation::LessThanZero;
    double slack = 0.0;  // the left-hand side; negative = satisfied with room
    bool satisfied = false;
    bool exact = false;
};

struct PropertyVerdict {
    bool holds = false;
    std::string branch = "none";
    std::vector<InequalityMargin> margins;

    // Fixed-order text block, stable across runs for manifests.
    std::string render() const {
        std::string out = "branch: " + branch + "\nholds: " + (holds ? "yes" : "no") + "\n";
        for (const InequalityMargin& m : margins) {
            const char* rel = m.rel == Relation::LessThanZero
                                  ? " < 0"
                                  : (m.rel == Relation::AtMostZero ? " <= 0" : " = 0");
            out += m.name + rel + ": slack " + format_number(m.slack) +
                   (m.satisfied ? " ok" : " violated") + (m.exact ? " (exact)\n" : " (approx)\n");
        }
        return out;
    }
};

namespace detail {

inline InequalityMargin make_margin(const std::string& name, const Scalar& lhs, Relation rel) {
    InequalityMargin m;
    m.name = name;
    m.rel = rel;
    m.slack = lhs.value();
    m.exact = lhs.exact();
    int s = lhs.sign();
    m.satisfied = rel == Relation::LessThanZero ? s < 0
                 : rel == Relation::AtMostZero  ? s <= 0
                                                : s == 0;
    return m;
}

inline bool all_satisfied(const std::vector<InequalityMargin>& ms) {
    for (const auto& m : ms)
        if (!m.satisfied) return false;
    return true;
}

}  // namespace detail

// gamma < -d/p, beta < -d/p, and either s + d/2 + alpha < 0 (strict branch)
// or s + d/2 + alpha = 0 with theta < -1/q (boundary branch). At p = inf the
// shift conditions become gamma <= 0, beta <= 0; at q = inf the boundary
// condition becomes theta <= 0.
inline PropertyVerdict property_a(const SpaceSpec& spec, const PriorSpec& prior) {
    spec.validate();
    prior.validate();
    if (prior.gated()) throw input_error("property_a: dense-family predicate (see A'/A'')");
    using detail::Scalar;
    bool pinf = is_infinite(spec.p), qinf = is_infinite(spec.q);
    Scalar D = Scalar::integer(spec.d), P = Scalar::from(spec.p), Q = Scalar::from(spec.q);
    Scalar G = Scalar::from(prior.gamma), B = Scalar::from(prior.beta);
    Scalar TH = Scalar::from(prior.theta);
    Scalar core = Scalar::from(spec.s).plus(D.over(Scalar::integer(2))).plus(Scalar::from(prior.alpha));

    InequalityMargin c1 = pinf ? detail::make_margin("gamma", G, Relation::AtMostZero)
                               : detail::make_margin("gamma + d/p", G.plus(D.over(P)),
                                                     Relation::LessThanZero);
    InequalityMargin c2 = pinf ? detail::make_margin("beta", B, Relation::AtMostZero)
                               : detail::make_margin("beta + d/p", B.plus(D.over(P)),
                                                     Relation::LessThanZero);
    InequalityMargin strict = detail::make_margin("s + d/2 + alpha", core, Relation::LessThanZero);
    PropertyVerdict v;
    if (c1.satisfied && c2.satisfied && strict.satisfied) {
        v.holds = true;
        v.branch = "A-strict";
        v.margins = {c1, c2, strict};
        return v;
    }
    InequalityMargin at_zero = detail::make_margin("s + d/2 + alpha", core, Relation::EqualZero);
    InequalityMargin tail =
        qinf ? detail::make_margin("theta", TH, Relation::AtMostZero)
             : detail::make_margin("theta + 1/q", TH.plus(Scalar::integer(1).over(Q)),
                                   Relation::LessThanZero);
    if (c1.satisfied && c2.satisfied && at_zero.satisfied && tail.satisfied) {
        v.holds = true;
        v.branch = "A-boundary";
        v.margins = {c1, c2, at_zero, tail};
        return v;
    }
    v.margins = {c1, c2, strict, at_zero, tail};
    return v;
}

// Four clauses by the (p, q) infinity pattern, with the gate exponents
// entering as (d+nu)/p and mu/p.
inline PropertyVerdict property_a_prime(const SpaceSpec& spec, const PriorSpec& prior) {
    spec.validate();
    prior.validate();
    if (!prior.gated()) throw input_error("property_a_prime: gated-family predicate (see A)");
    using detail::Scalar;
    bool pinf = is_infinite(spec.p), qinf = is_infinite(spec.q);
    Scalar D = Scalar::integer(spec.d), P = Scalar::from(spec.p);
    Scalar G = Scalar::from(prior.gamma), B = Scalar::from(prior.beta);
    Scalar core = Scalar::from(spec.s).plus(D.over(Scalar::integer(2))).plus(Scalar::from(prior.alpha));
    PropertyVerdict v;
    if (!pinf) {
        Scalar shift = D.plus(Scalar::from(prior.nu)).over(P);
        Scalar core3 = core.plus(Scalar::from(prior.mu).over(P));
        Relation third = qinf ? Relation::AtMostZero : Relation::LessThanZero;
        v.margins = {
            detail::make_margin("gamma + (d+nu)/p", G.plus(shift), Relation::LessThanZero),
            detail::make_margin("beta + (d+nu)/p", B.plus(shift), Relation::LessThanZero),
            detail::make_margin("s + d/2 + alpha + mu/p", core3, third)};
        v.branch = qinf ? "A'-(b)" : "A'-(a)";
    } else {
        Relation third = qinf ? Relation::AtMostZero : Relation::LessThanZero;
        v.margins = {detail::make_margin("gamma", G, Relation::AtMostZero),
                     detail::make_margin("beta", B, Relation::AtMostZero),
                     detail::make_margin("s + d/2 + alpha", core, third)};
        v.branch = qinf ? "A'-(d)" : "A'-(c)";
    }
    v.holds = detail::all_satisfied(v.margins);
    if (!v.holds) v.branch = "none";
    return v;
}

// For p != inf the gate exponents are damped by max(r, p); at p = inf the
// non-strict closure conditions apply.
inline PropertyVerdict property_a_dprime(const SpaceSpec& spec, const PriorSpec& prior, double r) {
    spec.validate();
    prior.validate();
    if (!prior.gated()) throw input_error("property_a_dprime: gated-family predicate (see A)");
    if (!(r > 0.0)) throw input_error("property_a_dprime: need moment order r > 0");
    using detail::Scalar;
    Scalar D = Scalar::integer(spec.d), P = Scalar::from(spec.p);
    Scalar G = Scalar::from(prior.gamma), B = Scalar::from(prior.beta);
    Scalar core = Scalar::from(spec.s).plus(D.over(Scalar::integer(2))).plus(Scalar::from(prior.alpha));
    PropertyVerdict v;
    if (!is_infinite(spec.p)) {
        Scalar mrp = (is_infinite(r) || r >= spec.p) ? Scalar::from(r) : P;
        Scalar dp = D.over(P);
        Scalar nu_term = Scalar::from(prior.nu).over(mrp);
        v.margins = {detail::make_margin("gamma + d/p + nu/max(r,p)", G.plus(dp).plus(nu_term),
                                         Relation::LessThanZero),
                     detail::make_margin("beta + d/p + nu/max(r,p)", B.plus(dp).plus(nu_term),
                                         Relation::LessThanZero),
                     detail::make_margin("s + d/2 + alpha + mu/max(r,p)",
                                         core.plus(Scalar::from(prior.mu).over(mrp)),
                                         Relation::LessThanZero)};
        v.branch = "A''-(a)";
    } else {
        v.margins = {detail::make_margin("gamma", G, Relation::AtMostZero),
                     detail::make_margin("beta", B, Relation::AtMostZero),
                     detail::make_margin("s + d/2 + alpha", core, Relation::AtMostZero)};
        v.branch = "A''-(b)";
    }
    v.holds = detail::all_satisfied(v.margins);
    if (!v.holds) v.branch = "none";
    return v;
}

// k > max(s, d(1/p - 1) - s) for p in (0,1); k > |s| otherwise.
inline PropertyVerdict property_b(const SpaceSpec& spec, int k) {
    spec.validate();
    if (k < 1) throw input_error("property_b: need k >= 1");
    using detail::Scalar;
    Scalar K = Scalar::integer(k), S = Scalar::from(spec.s);
    PropertyVerdict v;
    if (!is_infinite(spec.p) && spec.p < 1.0) {
        Scalar gap = Scalar::integer(spec.d)
                         .times(Scalar::integer(1).over(Scalar::from(spec.p)).minus(Scalar::integer(1)));
        v.margins = {detail::make_margin("s - k", S.minus(K), Relation::LessThanZero),
                     detail::make_margin("d(1/p - 1) - s - k", gap.minus(S).minus(K),
                                         Relation::LessThanZero)};
        v.branch = "B-(a)";
    } else {
        v.margins = {detail::make_margin("s - k", S.minus(K), Relation::LessThanZero),
                     detail::make_margin("-s - k", S.times(Scalar::integer(-1)).minus(K),
                                         Relation::LessThanZero)};
        v.branch = "B-(b)";
    }
    v.holds = detail::all_satisfied(v.margins);
    if (!v.holds) v.branch = "none";
    return v;
}

// k > d(1/p - 1) + d/2 + alpha for p in (0,1); k > d/2 + alpha otherwise.
inline PropertyVerdict property_b_prime(int d, double p, double alpha, int k) {
    if (d < 1) throw input_error("property_b_prime: need d >= 1");
    if (!(p > 0.0)) throw input_error("property_b_prime: need p > 0");
    if (k < 1) throw input_error("property_b_prime: need k >= 1");
    using detail::Scalar;
    Scalar K = Scalar::integer(k), D = Scalar::integer(d);
    Scalar half = D.over(Scalar::integer(2)).plus(Scalar::from(alpha));
    PropertyVerdict v;
    if (!is_infinite(p) && p < 1.0) {
        Scalar gap =
            D.times(Scalar::integer(1).over(Scalar::from(p)).minus(Scalar::integer(1)));
        v.margins = {detail::make_margin("d(1/p - 1) + d/2 + alpha - k",
                                         gap.plus(half).minus(K), Relation::LessThanZero)};
        v.branch = "B'-(a)";
    } else {
        v.margins = {detail::make_margin("d/2 + alpha - k", half.minus(K),
                                         Relation::LessThanZero)};
        v.branch = "B'-(b)";
    }
    v.holds = detail::all_satisfied(v.margins);
    if (!v.holds) v.branch = "none";
    return v;
}

// Smallest wavelet order making both order conditions hold; they always do
// eventually, so the scan terminates.
inline int min_k(const SpaceSpec& spec, double alpha) {
    for (int k = 1; k <= 1000000; ++k)
        if (property_b(spec, k).holds && property_b_prime(spec.d, spec.p, alpha, k).holds)
            return k;
    throw input_error("min_k: no admissible order below 10^6");
}

}  // namespace rws

#endif
