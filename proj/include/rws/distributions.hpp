#ifndef RWS_DISTRIBUTIONS_HPP
#define RWS_DISTRIBUTIONS_HPP

// Template distributions for the coefficient fields: the common law of the
// i.i.d. factors, sampled from keyed uniforms, with analytic moments and
// moment-condition predicates.

#include <cstdint>
#include <string>

#include "rws/common.hpp"
#include "rws/io.hpp"
#include "rws/rng.hpp"

namespace rws {

enum class TemplateKind { Gaussian, Uniform, Rademacher, Pareto, TruncatedGaussian, Constant };

// All kinds are symmetric about 0 except the Constant test hook. Pareto is
// the symmetrized standard Pareto: |X| has survival t^{-a} on [1, inf) and
// the sign is an independent fair coin (experimental, for sharpness studies).
struct TemplateDistribution {
    TemplateKind kind = TemplateKind::Gaussian;
    double a = 0.0;  // Pareto tail index
    double R = 0.0;  // TruncatedGaussian radius
    double c = 0.0;  // Constant value

    static TemplateDistribution gaussian() { return {TemplateKind::Gaussian, 0, 0, 0}; }
    static TemplateDistribution uniform() { return {TemplateKind::Uniform, 0, 0, 0}; }
    static TemplateDistribution rademacher() { return {TemplateKind::Rademacher, 0, 0, 0}; }
    static TemplateDistribution pareto(double a) { return {TemplateKind::Pareto, a, 0, 0}; }
    static TemplateDistribution truncated_gaussian(double R) {
        return {TemplateKind::TruncatedGaussian, 0, R, 0};
    }
    static TemplateDistribution constant(double c) { return {TemplateKind::Constant, 0, 0, c}; }

    void validate() const {
        if (kind == TemplateKind::Pareto && !(a > 0.0))
            throw input_error("TemplateDistribution: Pareto tail index must be positive");
        if (kind == TemplateKind::TruncatedGaussian && !(R > 0.0))
            throw input_error("TemplateDistribution: truncation radius must be positive");
    }

    double sample(double u) const {
        switch (kind) {
            case TemplateKind::Gaussian:
                return normal_quantile(u);
            case TemplateKind::Uniform:
                return 2.0 * u - 1.0;
            case TemplateKind::Rademacher:
                return u < 0.5 ? -1.0 : 1.0;
            case TemplateKind::Pareto: {
                // One uniform feeds both the sign and the magnitude: given the
                // half, the rescaled remainder is again uniform.
                double s = u < 0.5 ? -1.0 : 1.0;
                double v = u < 0.5 ? 2.0 * u : 2.0 * (1.0 - u);
                return s * std::pow(v, -1.0 / a);
            }
            case TemplateKind::TruncatedGaussian: {
                double lo = normal_cdf(-R);
                return normal_quantile(lo + u * (1.0 - 2.0 * lo));
            }
            case TemplateKind::Constant:
                return c;
        }
        throw input_error("TemplateDistribution: unknown kind");
    }

    double sample_key(std::uint64_t key) const { return sample(uniform01(key)); }

    double mean() const { return kind == TemplateKind::Constant ? c : 0.0; }

    double variance() const {
        switch (kind) {
            case TemplateKind::Gaussian:
                return 1.0;
            case TemplateKind::Uniform:
                return 1.0 / 3.0;
            case TemplateKind::Rademacher:
                return 1.0;
            case TemplateKind::Pareto:
                return a > 2.0 ? a / (a - 2.0) : inf;
            case TemplateKind::TruncatedGaussian: {
                double phi = std::exp(-0.5 * R * R) * 0.3989422804014327;
                double mass = 1.0 - 2.0 * normal_cdf(-R);
                return 1.0 - 2.0 * R * phi / mass;
            }
            case TemplateKind::Constant:
                return 0.0;
        }
        throw input_error("TemplateDistribution: unknown kind");
    }

    bool bounded() const {
        return kind == TemplateKind::Uniform || kind == TemplateKind::Rademacher ||
               kind == TemplateKind::TruncatedGaussian || kind == TemplateKind::Constant;
    }

    // E[|X|^t] < infinity for t >= 0.
    bool abs_moment_finite(double t) const {
        if (t < 0.0) throw input_error("abs_moment_finite: negative exponent");
        return kind == TemplateKind::Pareto ? t < a : true;
    }

    // E[|X|^{-t}] < infinity for t >= 0; relevant kinds have bounded density
    // near 0, so the threshold is t < 1, except for laws supported away from 0.
    bool neg_moment_finite(double t) const {
        if (t < 0.0) throw input_error("neg_moment_finite: negative exponent");
        switch (kind) {
            case TemplateKind::Rademacher:
            case TemplateKind::Pareto:
                return true;
            case TemplateKind::Constant:
                return c != 0.0 || t == 0.0;
            default:
                return t < 1.0;
        }
    }

    // E[exp(C|X|^t)] < infinity for some C > 0.
    bool exp_moment_finite(double t) const {
        if (!(t > 0.0)) throw input_error("exp_moment_finite: exponent must be positive");
        if (bounded()) return true;
        if (kind == TemplateKind::Gaussian) return t <= 2.0;
        return false;  // polynomial tails defeat every exponential moment
    }

    // E[|X|^t log2+ |X|] < infinity.
    bool log_moment_finite(double t) const {
        if (t < 0.0) throw input_error("log_moment_finite: negative exponent");
        return kind == TemplateKind::Pareto ? t < a : true;
    }

    std::string describe() const {
        switch (kind) {
            case TemplateKind::Gaussian:
                return "gaussian";
            case TemplateKind::Uniform:
                return "uniform";
            case TemplateKind::Rademacher:
                return "rademacher";
            case TemplateKind::Pareto:
                return "pareto(" + format_number(a) + ")";
            case TemplateKind::TruncatedGaussian:
                return "truncated-gaussian(" + format_number(R) + ")";
            case TemplateKind::Constant:
                return "constant(" + format_number(c) + ")";
        }
        return "?";
    }

    static TemplateDistribution parse(const std::string& s) {
        auto arg = [&](std::size_t at) {
            std::size_t close = s.rfind(')');
            if (close == std::string::npos || close <= at)
                throw input_error("TemplateDistribution: malformed '" + s + "'");
            return parse_number(s.substr(at, close - at));
        };
        if (s == "gaussian") return gaussian();
        if (s == "uniform") return uniform();
        if (s == "rademacher") return rademacher();
        if (s.rfind("pareto(", 0) == 0) return pareto(arg(7));
        if (s.rfind("truncated-gaussian(", 0) == 0) return truncated_gaussian(arg(19));
        if (s.rfind("constant(", 0) == 0) return constant(arg(9));
        throw input_error("TemplateDistribution: unknown spec '" + s + "'");
    }
};

// The moment hypotheses required by the various membership criteria.
enum class MomentConditionKind {
    PolyP,      // E[|X|^{p(1+eps)}] < inf for some eps > 0
    PolyMaxRP,  // E[|X|^{(1+eps) max(r,p)}] < inf for some eps > 0
    ExpMaxRP,   // E[exp(C |X|^{max(r,p)})] < inf for some C > 0
    LogP,       // E[|X|^p log2+ |X|] < inf
    Bounded,    // |X| <= R almost surely
};

struct MomentCondition {
    MomentConditionKind kind = MomentConditionKind::PolyP;
    double p = 2.0;
    double r = 2.0;
};

inline bool template_moment_ok(const TemplateDistribution& dist, const MomentCondition& cond) {
    double mrp = std::max(cond.r, cond.p);
    switch (cond.kind) {
        case MomentConditionKind::PolyP:
            // exists eps > 0 with the (1+eps)-boosted moment finite
            return dist.kind == TemplateKind::Pareto ? cond.p < dist.a : true;
        case MomentConditionKind::PolyMaxRP:
            return dist.kind == TemplateKind::Pareto ? mrp < dist.a : true;
        case MomentConditionKind::ExpMaxRP:
            return dist.exp_moment_finite(mrp);
        case MomentConditionKind::LogP:
            return dist.log_moment_finite(cond.p);
        case MomentConditionKind::Bounded:
            return dist.bounded();
    }
    throw input_error("template_moment_ok: unknown condition");
}

}  // namespace rws

#endif
