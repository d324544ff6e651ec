#ifndef RWS_PRIORS_HPP
#define RWS_PRIORS_HPP

// Random wavelet-series priors: a dense family (deterministic decay times
// i.i.d. template draws) and a sparse variant with independent Bernoulli
// gates. All draws are keyed, so any truncation of the infinite family can be
// materialized reproducibly and refined without re-drawing.

#include <cstdint>
#include <string>
#include <vector>

#include "rws/common.hpp"
#include "rws/distributions.hpp"
#include "rws/field.hpp"
#include "rws/io.hpp"
#include "rws/lattice.hpp"
#include "rws/rng.hpp"

namespace rws {

enum class PriorFamily { Besov, BernoulliBesov };

struct PriorSpec {
    PriorFamily family = PriorFamily::Besov;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double theta = 0.0;  // dense family only
    double mu = 0.0;     // gated family only, <= 0
    double nu = 0.0;     // gated family only, <= 0
    int k = 1;           // smoothness order of the intended wavelet system
    TemplateDistribution tmpl = TemplateDistribution::gaussian();

    void validate() const {
        for (double v : {alpha, beta, gamma, theta, mu, nu})
            if (!std::isfinite(v)) throw input_error("PriorSpec: parameters must be finite");
        if (family == PriorFamily::BernoulliBesov && (mu > 0.0 || nu > 0.0))
            throw input_error("PriorSpec: gate exponents must satisfy mu <= 0 and nu <= 0");
        if (k < 1) throw input_error("PriorSpec: smoothness order must be >= 1");
        tmpl.validate();
    }

    bool gated() const { return family == PriorFamily::BernoulliBesov; }

    void to_manifest(Manifest& m) const {
        m.set("family", gated() ? "bernoulli-besov" : "besov");
        m.set("alpha", alpha);
        m.set("beta", beta);
        m.set("gamma", gamma);
        if (gated()) {
            m.set("mu", mu);
            m.set("nu", nu);
        } else {
            m.set("theta", theta);
        }
        m.set("k", k);
        m.set("template", tmpl.describe());
    }

    static PriorSpec from_manifest(const Manifest& m) {
        PriorSpec p;
        std::string fam = m.get("family");
        if (fam == "besov")
            p.family = PriorFamily::Besov;
        else if (fam == "bernoulli-besov")
            p.family = PriorFamily::BernoulliBesov;
        else
            throw input_error("PriorSpec: unknown family '" + fam + "'");
        p.alpha = m.get_number("alpha");
        p.beta = m.get_number("beta");
        p.gamma = m.get_number("gamma");
        if (p.gated()) {
            p.mu = m.get_number("mu");
            p.nu = m.get_number("nu");
        } else {
            p.theta = m.get_number("theta");
        }
        p.k = static_cast<int>(m.get_int("k"));
        p.tmpl = TemplateDistribution::parse(m.get("template"));
        p.validate();
        return p;
    }
};

// Gate probability 2^{j mu} (1 + |m|_inf / 2^j)^nu.
inline double bernoulli_prob(double mu, double nu, int j, const std::vector<std::int64_t>& m) {
    if (mu > 0.0 || nu > 0.0) throw input_error("bernoulli_prob: need mu <= 0 and nu <= 0");
    if (j < 0) throw input_error("bernoulli_prob: negative scale");
    return pow2(j * mu) * std::pow(1.0 + double(sup_norm(m)) / pow2(j), nu);
}

// 2^{j alpha} (j+1)^theta (1 + |m|_inf / 2^j)^{beta, or gamma at j=0};
// the gated family omits the (j+1)^theta factor.
inline double deterministic_factor(const PriorSpec& prior, int j, std::int64_t m_norm) {
    double expo = (j == 0) ? prior.gamma : prior.beta;
    double f = pow2(j * prior.alpha) * std::pow(1.0 + double(m_norm) / pow2(j), expo);
    if (!prior.gated()) f *= std::pow(double(j) + 1.0, prior.theta);
    return f;
}

namespace detail {

inline std::uint64_t index_key(std::uint64_t seed, std::uint64_t tag, int j, unsigned t,
                               const std::int64_t* m, int d) {
    KeyHash h(seed);
    h.absorb(tag).absorb(std::uint64_t(j)).absorb(std::uint64_t(t));
    for (int k = 0; k < d; ++k) h.absorb_signed(m[k]);
    return h.value();
}

}  // namespace detail

// Test hooks: the raw template draw and the raw gate attached to an index.
inline double sample_xi(const PriorSpec& prior, const BasisIndex& idx, std::uint64_t seed) {
    idx.validate();
    return prior.tmpl.sample_key(
        detail::index_key(seed, stream::template_draw, idx.j, idx.t, idx.m.data(), idx.dim()));
}

inline int sample_gate(const PriorSpec& prior, const BasisIndex& idx, std::uint64_t seed) {
    idx.validate();
    if (!prior.gated()) return 1;
    double u = uniform01(
        detail::index_key(seed, stream::gate_draw, idx.j, idx.t, idx.m.data(), idx.dim()));
    return u < bernoulli_prob(prior.mu, prior.nu, idx.j, idx.m) ? 1 : 0;
}

inline double deterministic_coeff(const PriorSpec& prior, const BasisIndex& idx,
                                  std::uint64_t seed) {
    idx.validate();
    prior.validate();
    double v = deterministic_factor(prior, idx.j, sup_norm(idx.m)) * sample_xi(prior, idx, seed);
    if (prior.gated() && sample_gate(prior, idx, seed) == 0) v = 0.0;
    return v;
}

// cap(j) = max(2^{j+2}, 32): covers the dyadic cube counted by the level
// statistics, with margin at coarse scales.
inline std::vector<std::int64_t> default_caps(int J_max) {
    if (J_max < 0) throw input_error("default_caps: need J_max >= 0");
    std::vector<std::int64_t> cap(J_max + 1);
    for (int j = 0; j <= J_max; ++j)
        cap[j] = std::max<std::int64_t>(std::int64_t{1} << (j + 2), 32);
    return cap;
}

inline CoefficientField sample_field(const PriorSpec& prior, int d, int J_max,
                                     const std::vector<std::int64_t>& cap, std::uint64_t seed,
                                     std::uint64_t max_bytes = std::uint64_t{1} << 31) {
    prior.validate();
    CoefficientField field(d, J_max, cap, max_bytes);
    for (int j = 0; j <= J_max; ++j) {
        const ShiftList& sl = field.shifts(j);
        for (unsigned t = field.first_type(j); t <= field.last_type(j); ++t) {
            std::vector<double>& vals = field.level(j, t);
            for (std::size_t i = 0; i < sl.size(); ++i) {
                const std::int64_t* m = sl.at(i);
                double f = deterministic_factor(prior, j, sup_norm(m, d));
                double v =
                    f * prior.tmpl.sample_key(detail::index_key(seed, stream::template_draw, j, t, m, d));
                if (prior.gated()) {
                    double u =
                        uniform01(detail::index_key(seed, stream::gate_draw, j, t, m, d));
                    double rho = pow2(j * prior.mu) *
                                 std::pow(1.0 + double(sup_norm(m, d)) / pow2(j), prior.nu);
                    if (!(u < rho)) v = 0.0;
                }
                vals[i] = v;
            }
        }
    }
    Manifest& man = field.manifest();
    man.set("field", "prior");
    prior.to_manifest(man);
    man.set("d", d);
    man.set("J_max", J_max);
    std::string capdesc;
    for (std::size_t i = 0; i < cap.size(); ++i)
        capdesc += (i ? ";" : "") + std::to_string(cap[i]);
    man.set("cap", capdesc);
    man.set("seed", static_cast<unsigned long long>(seed));
    man.set("truncation-note",
            "levels truncated at cap(j); omitted shift tails are controlled by the decay "
            "exponents when beta < -d/p");
    return field;
}

// Ungated and gate views of the underlying i.i.d. families over all types
// t in {0, ..., 2^d - 1} (the raw family exists for every type at every
// scale, including combinations the prior itself never uses).
struct RawCoefficients {
    int d = 1;
    int J_max = 0;
    std::vector<std::int64_t> cap;            // per scale
    std::vector<ShiftList> shifts;            // per scale, enumeration order
    std::vector<std::vector<std::vector<double>>> xi;     // [t][j][tau]
    std::vector<std::vector<std::vector<std::uint8_t>>> gate;  // [t][j][tau], gated only
    bool has_gates = false;

    unsigned type_count() const { return 1u << d; }
};

inline RawCoefficients sample_raw(const PriorSpec& prior, int d, int J_max,
                                  const std::vector<std::int64_t>& cap, std::uint64_t seed) {
    prior.validate();
    if (d < 1 || d > 16 || J_max < 0) throw input_error("sample_raw: bad dimensions");
    if (cap.size() != static_cast<std::size_t>(J_max) + 1)
        throw input_error("sample_raw: cap must list scales 0..J_max");
    RawCoefficients raw;
    raw.d = d;
    raw.J_max = J_max;
    raw.cap = cap;
    raw.has_gates = prior.gated();
    unsigned nt = raw.type_count();
    raw.xi.resize(nt);
    if (raw.has_gates) raw.gate.resize(nt);
    for (int j = 0; j <= J_max; ++j) raw.shifts.push_back(enumerate_shifts(d, cap[j]));
    for (unsigned t = 0; t < nt; ++t) {
        raw.xi[t].resize(J_max + 1);
        if (raw.has_gates) raw.gate[t].resize(J_max + 1);
        for (int j = 0; j <= J_max; ++j) {
            const ShiftList& sl = raw.shifts[j];
            raw.xi[t][j].resize(sl.size());
            if (raw.has_gates) raw.gate[t][j].resize(sl.size());
            for (std::size_t i = 0; i < sl.size(); ++i) {
                const std::int64_t* m = sl.at(i);
                raw.xi[t][j][i] = prior.tmpl.sample_key(
                    detail::index_key(seed, stream::template_draw, j, t, m, d));
                if (raw.has_gates) {
                    double u = uniform01(detail::index_key(seed, stream::gate_draw, j, t, m, d));
                    double rho = pow2(j * prior.mu) *
                                 std::pow(1.0 + double(sup_norm(m, d)) / pow2(j), prior.nu);
                    raw.gate[t][j][i] = u < rho ? 1 : 0;
                }
            }
        }
    }
    return raw;
}

}  // namespace rws

#endif
