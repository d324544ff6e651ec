#ifndef RWS_SEQSPACE_HPP
#define RWS_SEQSPACE_HPP

// Weighted Besov sequence norms over truncated coefficient fields:
// l_p within a level (with the polynomially weighted argument
// 2^{-(j-1)}m, or m itself at j=0), l_q with scale factors
// 2^{j(s + d/2 - d/p)} across levels.

#include <cstdint>
#include <vector>

#include "rws/common.hpp"
#include "rws/field.hpp"
#include "rws/priors.hpp"

namespace rws {

struct SpaceSpec {
    int d = 1;
    double s = 0.0;
    double p = 2.0;      // in (0, inf]
    double q = 2.0;      // in (0, inf]
    double sigma = 0.0;  // weight exponent; 0 = unweighted

    void validate() const {
        if (d < 1) throw input_error("SpaceSpec: need d >= 1");
        if (!(p > 0.0) || !(q > 0.0)) throw input_error("SpaceSpec: need p > 0 and q > 0");
        if (!std::isfinite(s) || !std::isfinite(sigma))
            throw input_error("SpaceSpec: s and sigma must be finite");
    }

    // 2^{j(s + d/2 - d/p)}; the integrability correction drops out at p = inf.
    double scale_factor(int j) const {
        double dp = is_infinite(p) ? 0.0 : double(d) / p;
        return pow2(j * (s + 0.5 * d - dp));
    }

    void to_manifest(Manifest& m) const {
        m.set("s", s);
        m.set("p", p);
        m.set("q", q);
        m.set("sigma", sigma);
    }

    static SpaceSpec from_manifest(const Manifest& m, int d) {
        SpaceSpec sp;
        sp.d = d;
        sp.s = m.get_number("s");
        sp.p = m.get_number("p");
        sp.q = m.get_number("q");
        sp.sigma = m.get_number("sigma");
        sp.validate();
        return sp;
    }
};

inline double weight_w_sigma(const std::vector<double>& x, double sigma) {
    double n2 = 0.0;
    for (double c : x) {
        if (!std::isfinite(c)) throw input_error("weight_w_sigma: point must be finite");
        n2 += c * c;
    }
    return std::pow(1.0 + n2, 0.5 * sigma);
}

struct LevelContribution {
    int j = 0;
    unsigned t = 0;
    double level = 0.0;     // l_p block norm
    double weighted = 0.0;  // scale factor times block norm
};

struct NormReport {
    double total = 0.0;
    double eta1 = 0.0;  // j = 0 block
    double eta2 = 0.0;  // j >= 1 block
    std::vector<LevelContribution> per_level;
    int J_max = 0;
    std::vector<std::int64_t> caps;
};

// l_p over stored shifts of w_sigma(2^{-(j-1)}m) |a_{j,t,m}| (argument m
// itself at j = 0); sup instead of sum at p = inf.
inline double level_norm(const CoefficientField& field, int j, unsigned t,
                         const SpaceSpec& spec) {
    spec.validate();
    if (spec.d != field.dim()) throw input_error("level_norm: dimension mismatch");
    const std::vector<double>& vals = field.level(j, t);
    const ShiftList& sl = field.shifts(j);
    int d = field.dim();
    double argscale = (j == 0) ? 1.0 : pow2(-(j - 1));
    bool weighted = spec.sigma != 0.0;
    if (is_infinite(spec.p)) {
        double sup = 0.0;
        for (std::size_t i = 0; i < vals.size(); ++i) {
            double term = std::abs(vals[i]);
            if (term == 0.0) continue;
            if (weighted) {
                double n2 = 0.0;
                const std::int64_t* m = sl.at(i);
                for (int k = 0; k < d; ++k) n2 += double(m[k]) * double(m[k]);
                term *= std::pow(1.0 + argscale * argscale * n2, 0.5 * spec.sigma);
            }
            sup = std::max(sup, term);
        }
        return sup;
    }
    kahan_sum acc;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        double term = std::abs(vals[i]);
        if (term == 0.0) continue;
        if (weighted) {
            double n2 = 0.0;
            const std::int64_t* m = sl.at(i);
            for (int k = 0; k < d; ++k) n2 += double(m[k]) * double(m[k]);
            term *= std::pow(1.0 + argscale * argscale * n2, 0.5 * spec.sigma);
        }
        acc.add(std::pow(term, spec.p));
    }
    return std::pow(acc.value(), 1.0 / spec.p);
}

// Full norm up to scale J_use (defaults to the stored top scale). The total
// is accumulated over all levels directly; eta1/eta2 re-derive the j = 0 and
// j >= 1 blocks, so the decomposition identity is a genuine invariant.
inline NormReport seq_norm(const CoefficientField& field, const SpaceSpec& spec,
                           int J_use = -1) {
    spec.validate();
    if (spec.d != field.dim()) throw input_error("seq_norm: dimension mismatch");
    if (J_use < 0) J_use = field.top_scale();
    if (J_use > field.top_scale()) throw input_error("seq_norm: scale beyond truncation");

    NormReport rep;
    rep.J_max = J_use;
    rep.caps.assign(field.caps().begin(), field.caps().begin() + J_use + 1);
    for (int j = 0; j <= J_use; ++j) {
        double factor = spec.scale_factor(j);
        for (unsigned t = field.first_type(j); t <= field.last_type(j); ++t) {
            LevelContribution lc;
            lc.j = j;
            lc.t = t;
            lc.level = level_norm(field, j, t, spec);
            lc.weighted = factor * lc.level;
            rep.per_level.push_back(lc);
        }
    }
    if (is_infinite(spec.q)) {
        for (const LevelContribution& lc : rep.per_level) {
            double& block = lc.j == 0 ? rep.eta1 : rep.eta2;
            block = std::max(block, lc.weighted);
            rep.total = std::max(rep.total, lc.weighted);
        }
    } else {
        kahan_sum all, head, tail;
        for (const LevelContribution& lc : rep.per_level) {
            double w = std::pow(lc.weighted, spec.q);
            all.add(w);
            (lc.j == 0 ? head : tail).add(w);
        }
        rep.total = std::pow(all.value(), 1.0 / spec.q);
        rep.eta1 = std::pow(head.value(), 1.0 / spec.q);
        rep.eta2 = std::pow(tail.value(), 1.0 / spec.q);
    }
    return rep;
}

// The weighted norm of a prior sample agrees, up to constants, with the
// unweighted norm of the prior with both shift exponents moved by sigma; the
// gate exponents are untouched.
inline PriorSpec weight_shift(const PriorSpec& prior, double sigma) {
    if (!std::isfinite(sigma)) throw input_error("weight_shift: sigma must be finite");
    PriorSpec shifted = prior;
    shifted.beta += sigma;
    shifted.gamma += sigma;
    return shifted;
}

}  // namespace rws

#endif
