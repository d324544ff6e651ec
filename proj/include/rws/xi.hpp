#ifndef RWS_XI_HPP
#define RWS_XI_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "common.hpp"
#include "conditions.hpp"
#include "lattice.hpp"
#include "priors.hpp"

namespace rws {

// Averaged double-sup statistic of a raw coefficient family, per type and
// overall. The overall value is the max over all 2^d types.
struct XiStatistic {
    std::vector<double> per_type;  // indexed by type bitmask
    double overall = 0.0;
    int J_max = 0;
    std::vector<std::int64_t> cap;
};

namespace detail {

// sup over stored rows j of
//   (1/M_j) * sum of w(j, tau) over the centered cube tau = 1..M_j
//   + sup over stored full shells l >= j of the shell average of w(j, .).
// Rows whose stored cube does not reach M_j are skipped, and only shells
// entirely inside the row's truncation participate, so the result is a
// lower bound for the untruncated statistic that is exact whenever the
// truncation covers everything the sup attains.
template <typename Weight>
double double_sup(const RawCoefficients& raw, const ShellTable& shells, Weight w) {
    double best = 0.0;
    for (int j = 0; j <= raw.J_max; ++j) {
        std::size_t stored = raw.shifts[static_cast<std::size_t>(j)].size();
        std::uint64_t cube = shells.M[static_cast<std::size_t>(j)];
        if (cube > stored) continue;
        kahan_sum head;
        for (std::size_t i = 0; i < cube; ++i) head.add(w(j, i));
        double row = head.value() / double(cube);
        double shell_best = 0.0;
        for (std::size_t l = static_cast<std::size_t>(j); l + 1 < shells.M.size(); ++l) {
            if (shells.M[l + 1] > stored) break;
            kahan_sum band;
            for (std::size_t i = shells.M[l]; i < shells.M[l + 1]; ++i) band.add(w(j, i));
            shell_best = std::max(shell_best, band.value() / double(shells.N[l]));
        }
        best = std::max(best, row + shell_best);
    }
    return best;
}

inline void check_raw_vs_shells(const RawCoefficients& raw, const ShellTable& shells,
                                const char* who) {
    if (shells.d != raw.d) throw input_error(std::string(who) + ": shell table dimension mismatch");
    if (shells.M.size() < static_cast<std::size_t>(raw.J_max) + 1)
        throw input_error(std::string(who) + ": shell table must cover scales 0..J_max");
}

}  // namespace detail

// Per-type statistic built from |xi|^p alone. Requires a finite positive
// exponent; the sup form has no p = infinity analogue.
inline XiStatistic xi_statistic(const RawCoefficients& raw, double p, const ShellTable& shells) {
    if (!(p > 0.0) || is_infinite(p)) throw input_error("xi_statistic: requires p in (0, inf)");
    detail::check_raw_vs_shells(raw, shells, "xi_statistic");
    XiStatistic out;
    out.J_max = raw.J_max;
    out.cap = raw.cap;
    out.per_type.resize(raw.type_count());
    for (unsigned t = 0; t < raw.type_count(); ++t) {
        const auto& rows = raw.xi[t];
        out.per_type[t] = detail::double_sup(raw, shells, [&](int j, std::size_t i) {
            return std::pow(std::abs(rows[static_cast<std::size_t>(j)][i]), p);
        });
        out.overall = std::max(out.overall, out.per_type[t]);
    }
    return out;
}

// One row of the empirical level-uniformity check: the weighted lp norm of
// a raw row against its predicted growth 2^{jd/p} * Xi^{1/p}.
struct MasterBoundEntry {
    int j = 0;
    unsigned t = 0;
    double z = 0.0;      // weighted lp norm over the stored truncation
    double bound = 0.0;  // 2^{jd/p} * Xi^{1/p}
    double ratio = 0.0;
};

struct MasterBoundProfile {
    std::vector<MasterBoundEntry> entries;  // all stored (j, t)
    double xi = 0.0;
    double max_ratio = 0.0;
    double min_ratio = inf;
};

// Evaluates Z_{j,t} = || (1 + |m|/2^j)^beta |xi_{j,t,m}| ||_{lp} over the
// stored truncation for every scale and type, and compares against the
// uniform prediction. The weight sum behind the prediction converges only
// when beta < -d/p, so that inequality is enforced up front.
inline MasterBoundProfile master_bound_profile(const RawCoefficients& raw, double p, double beta,
                                               const ShellTable& shells) {
    if (!(p > 0.0) || is_infinite(p)) throw input_error("master_bound: requires p in (0, inf)");
    detail::check_raw_vs_shells(raw, shells, "master_bound");
    using detail::Scalar;
    Scalar margin = Scalar::from(beta).plus(Scalar::integer(raw.d).over(Scalar::from(p)));
    if (margin.sign() >= 0) throw input_error("master_bound: requires beta + d/p < 0");

    MasterBoundProfile out;
    out.xi = xi_statistic(raw, p, shells).overall;
    if (!(out.xi > 0.0)) throw input_error("master_bound: degenerate field with Xi = 0");
    double xi_root = std::pow(out.xi, 1.0 / p);
    for (int j = 0; j <= raw.J_max; ++j) {
        const ShiftList& sl = raw.shifts[static_cast<std::size_t>(j)];
        double scale = pow2(double(j));
        for (unsigned t = 0; t < raw.type_count(); ++t) {
            const auto& vals = raw.xi[t][static_cast<std::size_t>(j)];
            kahan_sum acc;
            for (std::size_t i = 0; i < sl.size(); ++i) {
                double wgt = std::pow(1.0 + double(sup_norm(sl.at(i), raw.d)) / scale, beta);
                acc.add(std::pow(wgt * std::abs(vals[i]), p));
            }
            MasterBoundEntry e;
            e.j = j;
            e.t = t;
            e.z = std::pow(acc.value(), 1.0 / p);
            e.bound = pow2(double(j) * raw.d / p) * xi_root;
            e.ratio = e.z / e.bound;
            out.max_ratio = std::max(out.max_ratio, e.ratio);
            out.min_ratio = std::min(out.min_ratio, e.ratio);
            out.entries.push_back(e);
        }
    }
    return out;
}

inline double master_bound_ratio(const RawCoefficients& raw, double p, double beta,
                                 const ShellTable& shells) {
    return master_bound_profile(raw, p, beta, shells).max_ratio;
}

// Gate-weighted variant. Each term carries the occupation probability of
// its slot raised to (p / max{r, p}) * (delta - 1), the gate value, and
// |xi|^p. The interpolation parameter delta must sit strictly inside (0, 1)
// and the combined decay inequality must hold or the reweighted averages
// lose their uniform-in-j meaning.
inline XiStatistic xi_tilde_statistic(const RawCoefficients& raw, double p, double r, double delta,
                                      double mu, double nu, double beta, const ShellTable& shells) {
    if (!(p > 0.0) || is_infinite(p))
        throw input_error("xi_tilde_statistic: requires p in (0, inf)");
    if (!(r > 0.0) || is_infinite(r))
        throw input_error("xi_tilde_statistic: requires r in (0, inf)");
    if (!(delta > 0.0 && delta < 1.0))
        throw input_error("xi_tilde_statistic: requires delta in (0, 1)");
    if (mu > 0.0 || nu > 0.0) throw input_error("xi_tilde_statistic: requires mu <= 0 and nu <= 0");
    detail::check_raw_vs_shells(raw, shells, "xi_tilde_statistic");
    using detail::Scalar;
    double mrp = std::max(r, p);
    Scalar lhs = Scalar::from(beta)
                     .times(Scalar::from(p))
                     .plus(Scalar::integer(raw.d))
                     .plus(Scalar::from(nu)
                               .times(Scalar::from(p))
                               .times(Scalar::integer(1).minus(Scalar::from(delta)))
                               .over(Scalar::from(mrp)));
    if (lhs.sign() >= 0)
        throw input_error(
            "xi_tilde_statistic: requires beta*p + d + nu*p*(1-delta)/max(r,p) < 0");

    double expo = (p / mrp) * (delta - 1.0);  // applied to the occupation probability
    XiStatistic out;
    out.J_max = raw.J_max;
    out.cap = raw.cap;
    out.per_type.resize(raw.type_count());
    for (unsigned t = 0; t < raw.type_count(); ++t) {
        out.per_type[t] = detail::double_sup(raw, shells, [&](int j, std::size_t i) {
            double lam = raw.has_gates ? double(raw.gate[t][static_cast<std::size_t>(j)][i]) : 1.0;
            if (lam == 0.0) return 0.0;
            const ShiftList& sl = raw.shifts[static_cast<std::size_t>(j)];
            double rho = pow2(j * mu) *
                         std::pow(1.0 + double(sup_norm(sl.at(i), raw.d)) / pow2(double(j)), nu);
            double x = raw.xi[t][static_cast<std::size_t>(j)][i];
            return std::pow(rho, expo) * std::pow(std::abs(x), p);
        });
        out.overall = std::max(out.overall, out.per_type[t]);
    }
    return out;
}

}  // namespace rws

#endif
