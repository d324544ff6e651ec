#ifndef RWS_ANALYSIS_HPP
#define RWS_ANALYSIS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "common.hpp"
#include "distributions.hpp"
#include "priors.hpp"
#include "rng.hpp"
#include "seqspace.hpp"
#include "xi.hpp"

namespace rws {

// Growth-rate thresholds for the Monte Carlo convergence classifier. The
// primary statistic is the per-level slope of log2(norm); truncated sums of
// a convergent series flatten out, divergent ones keep a positive slope.
// Between the two cutoffs a secondary regression against log(scale) decides
// whether the growth is logarithmic (slowly divergent) or just noise.
inline constexpr double phase_slope_convergent = 0.02;
inline constexpr double phase_slope_divergent = 0.10;
inline constexpr double phase_log_score_divergent = 0.20;

enum class PhaseClassification { Convergent, Divergent, Inconclusive };

inline const char* to_string(PhaseClassification c) {
    switch (c) {
        case PhaseClassification::Convergent: return "convergent";
        case PhaseClassification::Divergent: return "divergent";
        default: return "inconclusive";
    }
}

struct PhaseVerdict {
    PhaseClassification classification = PhaseClassification::Inconclusive;
    double slope = 0.0;            // median per-trial slope of log2(norm) vs scale
    double secondary_score = 0.0;  // median relative growth against log(scale)
    std::vector<double> per_trial;
    PriorSpec prior;
    SpaceSpec space;
    std::vector<int> J_list;
    int trials = 0;
    std::uint64_t seed = 0;
};

namespace detail {

inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t tag, int trial) {
    KeyHash h(seed);
    h.absorb(tag);
    h.absorb(static_cast<std::uint64_t>(trial));
    return h.value();
}

// Runs fn(0..n-1), strided across up to `threads` workers. Each task owns
// its output slot and reductions happen after the join in index order, so
// results do not depend on the worker count.
template <typename Fn>
inline void parallel_for(int n, int threads, Fn fn) {
    int T = std::max(1, std::min(threads, n));
    if (T == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(static_cast<std::size_t>(T));
    for (int w = 0; w < T; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int i = w; i < n; i += T) fn(i);
            } catch (...) {
                errs[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

inline double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(x.size());
    my /= double(x.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    return num / den;
}

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& v) {
    kahan_sum s;
    for (double x : v) s.add(x);
    MeanSe r;
    r.mean = s.value() / double(v.size());
    if (v.size() < 2) return r;
    kahan_sum q;
    for (double x : v) q.add((x - r.mean) * (x - r.mean));
    r.se = std::sqrt(q.value() / double(v.size() - 1) / double(v.size()));
    return r;
}

// Slope of log2(norm) over the last `win` scales. Zero norms are dropped
// (a truncated tail that has not activated yet); a non-finite norm anywhere
// in the window is treated as blow-up.
inline double growth_slope(const std::vector<int>& J, const std::vector<double>& norms,
                           std::size_t win) {
    std::vector<double> xs, ys;
    for (std::size_t i = norms.size() - win; i < norms.size(); ++i) {
        double v = norms[i];
        if (!std::isfinite(v)) return inf;
        if (v == 0.0) continue;
        xs.push_back(double(J[i]));
        ys.push_back(std::log2(v));
    }
    if (xs.size() < 2) return 0.0;
    return lsq_slope(xs, ys);
}

// Relative growth of norm^q across the window, measured against log(scale).
// Linear-in-log growth of the q-th power is the signature of the boundary
// regimes where the primary slope decays like 1/J.
inline double log_window_score(const std::vector<int>& J, const std::vector<double>& norms,
                               double q, std::size_t win) {
    double qq = is_infinite(q) ? 1.0 : q;
    std::vector<double> xs, ys;
    for (std::size_t i = norms.size() - win; i < norms.size(); ++i) {
        double y = std::pow(norms[i], qq);
        if (!std::isfinite(y)) return inf;
        xs.push_back(std::log(double(J[i]) + 1.0));
        ys.push_back(y);
    }
    double b = lsq_slope(xs, ys);
    double y_last = ys.back();
    if (!(y_last > 0.0)) return 0.0;
    return b * (xs.back() - xs.front()) / y_last;
}

}  // namespace detail

// Monte Carlo convergence classifier. Each trial draws one field at the top
// scale and evaluates the nested partial norms over J_list; the keyed RNG
// makes the truncations of a single trial agree on shared indices. Slopes
// are aggregated by median so a few heavy-tailed trials cannot flip the
// verdict.
inline PhaseVerdict phase_classify(const PriorSpec& prior, const SpaceSpec& spec,
                                   const std::vector<int>& J_list, int trials, std::uint64_t seed,
                                   int threads = 1) {
    prior.validate();
    spec.validate();
    if (J_list.size() < 4) throw input_error("phase_classify: need at least 4 scales");
    for (std::size_t i = 0; i < J_list.size(); ++i) {
        if (J_list[i] < 0 || (i > 0 && J_list[i] <= J_list[i - 1]))
            throw input_error("phase_classify: scales must be nonnegative and increasing");
    }
    if (trials < 20) throw input_error("phase_classify: need at least 20 trials");

    PhaseVerdict out;
    out.prior = prior;
    out.space = spec;
    out.J_list = J_list;
    out.trials = trials;
    out.seed = seed;

    int J_top = J_list.back();
    std::vector<std::int64_t> caps = default_caps(J_top);
    std::vector<double> scores(static_cast<std::size_t>(trials));
    out.per_trial.resize(static_cast<std::size_t>(trials));
    detail::parallel_for(trials, threads, [&](int trial) {
        std::uint64_t sub = detail::trial_seed(seed, stream::trial_draw, trial);
        CoefficientField field = sample_field(prior, spec.d, J_top, caps, sub);
        std::vector<double> norms;
        for (int J : J_list) norms.push_back(seq_norm(field, spec, J).total);
        out.per_trial[static_cast<std::size_t>(trial)] = detail::growth_slope(J_list, norms, 4);
        scores[static_cast<std::size_t>(trial)] = detail::log_window_score(J_list, norms, spec.q, 4);
    });
    out.slope = detail::median(out.per_trial);
    out.secondary_score = detail::median(scores);

    if (out.slope < phase_slope_convergent) {
        out.classification = PhaseClassification::Convergent;
    } else if (out.slope > phase_slope_divergent) {
        out.classification = PhaseClassification::Divergent;
    } else if (out.secondary_score > phase_log_score_divergent) {
        out.classification = PhaseClassification::Divergent;
    } else {
        out.classification = PhaseClassification::Inconclusive;
    }
    return out;
}

struct MomentEstimate {
    double mean = 0.0;
    double se = 0.0;
    double max_to_sum = 0.0;  // heavy-tail diagnostic; near 1 means one trial dominates
    bool heavy_tail = false;
    std::vector<double> samples;
};

// Sample mean and standard error of norm^r over independent trials, with the
// max-summand-to-sum ratio as a non-stabilization flag.
inline MomentEstimate estimate_moment(const PriorSpec& prior, const SpaceSpec& spec, double r,
                                      int trials, int J_max, std::uint64_t seed, int threads = 1) {
    prior.validate();
    spec.validate();
    if (!(r > 0.0) || is_infinite(r)) throw input_error("estimate_moment: requires r in (0, inf)");
    if (trials < 30) throw input_error("estimate_moment: need at least 30 trials");
    if (J_max < 0) throw input_error("estimate_moment: negative top scale");

    MomentEstimate out;
    std::vector<std::int64_t> caps = default_caps(J_max);
    out.samples.resize(static_cast<std::size_t>(trials));
    detail::parallel_for(trials, threads, [&](int trial) {
        std::uint64_t sub = detail::trial_seed(seed, stream::trial_draw, trial);
        CoefficientField field = sample_field(prior, spec.d, J_max, caps, sub);
        double norm = seq_norm(field, spec).total;
        out.samples[static_cast<std::size_t>(trial)] = std::pow(norm, r);
    });
    detail::MeanSe ms = detail::mean_se(out.samples);
    out.mean = ms.mean;
    out.se = ms.se;
    kahan_sum total;
    double top = 0.0;
    for (double x : out.samples) {
        total.add(x);
        top = std::max(top, x);
    }
    out.max_to_sum = total.value() > 0.0 ? top / total.value() : 0.0;
    out.heavy_tail = out.max_to_sum > 0.5;
    return out;
}

struct MgfEstimate {
    double c = 0.0;
    bool overflow = false;  // some trial exceeded the exponential range
    double mean = 0.0;
    double se = 0.0;
    std::vector<double> samples;
};

// Sample mean of exp(c * norm^r). A single trial pushing the exponent past
// the floating range marks the whole estimate as overflowed; the caller can
// then retry with a smaller c (see mgf_scan).
inline MgfEstimate estimate_mgf(const PriorSpec& prior, const SpaceSpec& spec, double c, double r,
                                int trials, int J_max, std::uint64_t seed, int threads = 1) {
    prior.validate();
    spec.validate();
    if (!(c > 0.0) || is_infinite(c)) throw input_error("estimate_mgf: requires c in (0, inf)");
    if (!(r > 0.0) || is_infinite(r)) throw input_error("estimate_mgf: requires r in (0, inf)");
    if (trials < 1) throw input_error("estimate_mgf: need at least 1 trial");
    if (J_max < 0) throw input_error("estimate_mgf: negative top scale");

    MgfEstimate out;
    out.c = c;
    std::vector<std::int64_t> caps = default_caps(J_max);
    out.samples.resize(static_cast<std::size_t>(trials));
    detail::parallel_for(trials, threads, [&](int trial) {
        std::uint64_t sub = detail::trial_seed(seed, stream::trial_draw, trial);
        CoefficientField field = sample_field(prior, spec.d, J_max, caps, sub);
        double norm = seq_norm(field, spec).total;
        double expo = c * std::pow(norm, r);
        out.samples[static_cast<std::size_t>(trial)] =
            (!std::isfinite(expo) || expo > 709.0) ? inf : std::exp(expo);
    });
    for (double s : out.samples)
        if (!std::isfinite(s)) out.overflow = true;
    if (out.overflow) {
        out.mean = inf;
        out.se = inf;
        return out;
    }
    detail::MeanSe ms = detail::mean_se(out.samples);
    out.mean = ms.mean;
    out.se = ms.se;
    return out;
}

// Halve c until the estimate stops overflowing (existence-style statements
// fix no particular c). Returns every attempt, last one finite unless
// max_steps ran out.
inline std::vector<MgfEstimate> mgf_scan(const PriorSpec& prior, const SpaceSpec& spec, double c0,
                                         double r, int trials, int J_max, std::uint64_t seed,
                                         int max_steps = 60, int threads = 1) {
    if (!(c0 > 0.0) || is_infinite(c0)) throw input_error("mgf_scan: requires c0 in (0, inf)");
    if (max_steps < 1) throw input_error("mgf_scan: need at least 1 step");
    std::vector<MgfEstimate> out;
    double c = c0;
    for (int step = 0; step < max_steps; ++step) {
        out.push_back(estimate_mgf(prior, spec, c, r, trials, J_max, seed, threads));
        if (!out.back().overflow) break;
        c *= 0.5;
    }
    return out;
}

// Exact moment-versus-mean comparison for a binomial count: the sigma-th
// moment never beats max{n rho, (n rho)^sigma} by more than a constant
// depending on sigma. Computed by direct pmf summation in extended
// precision, hence the small-n precondition.
inline double verify_binomial_bound(int n, double rho, double sigma) {
    if (n < 1 || n > 64) throw input_error("verify_binomial_bound: need 1 <= n <= 64");
    if (!(rho > 0.0 && rho < 1.0)) throw input_error("verify_binomial_bound: need rho in (0, 1)");
    if (!(sigma > 0.0) || is_infinite(sigma))
        throw input_error("verify_binomial_bound: need sigma in (0, inf)");
    long double moment = 0.0L;
    long double pmf = std::pow(1.0L - (long double)rho, n);  // k = 0 term
    for (int k = 1; k <= n; ++k) {
        pmf *= (long double)(n - k + 1) / (long double)k;
        pmf *= (long double)rho / (1.0L - (long double)rho);
        moment += std::pow((long double)k, (long double)sigma) * pmf;
    }
    long double np = (long double)n * (long double)rho;
    long double cap = std::max(np, std::pow(np, (long double)sigma));
    return double(moment / cap);
}

// Anti-concentration slack P(X > sigma E[X]) - (1-sigma)^2 E[X]^2 / E[X^2]
// for a finite nonnegative distribution, evaluated exactly on the support.
// Nonnegative for every valid input; the fuzz tests assert that.
inline double verify_paley_zygmund(const std::vector<double>& value,
                                   const std::vector<double>& prob, double sigma) {
    if (value.empty() || value.size() != prob.size())
        throw input_error("verify_paley_zygmund: support and probabilities must match");
    if (!(sigma >= 0.0 && sigma <= 1.0))
        throw input_error("verify_paley_zygmund: need sigma in [0, 1]");
    long double mass = 0.0L;
    for (std::size_t i = 0; i < value.size(); ++i) {
        if (!(value[i] >= 0.0)) throw input_error("verify_paley_zygmund: negative support point");
        if (!(prob[i] >= 0.0)) throw input_error("verify_paley_zygmund: negative probability");
        mass += (long double)prob[i];
    }
    if (!(mass > 0.0L)) throw input_error("verify_paley_zygmund: zero total mass");
    long double m1 = 0.0L, m2 = 0.0L;
    for (std::size_t i = 0; i < value.size(); ++i) {
        long double p = (long double)prob[i] / mass;
        m1 += (long double)value[i] * p;
        m2 += (long double)value[i] * (long double)value[i] * p;
    }
    if (!(m2 > 0.0L)) throw input_error("verify_paley_zygmund: degenerate zero distribution");
    long double thr = (long double)sigma * m1;
    long double tail = 0.0L;
    for (std::size_t i = 0; i < value.size(); ++i) {
        if ((long double)value[i] > thr) tail += (long double)prob[i] / mass;
    }
    long double bound = (1.0L - (long double)sigma) * (1.0L - (long double)sigma) * m1 * m1 / m2;
    return double(tail - bound);
}

// Fraction of trials in which the sup of n independent standard normals
// reaches sqrt(log n). The expected fraction tends to 1 as n grows; each
// trial stops at the first draw past the threshold.
inline double verify_sup_gaussian(int n, int trials, std::uint64_t seed) {
    if (n < 3) throw input_error("verify_sup_gaussian: need n >= 3");
    if (trials < 1) throw input_error("verify_sup_gaussian: need at least 1 trial");
    double threshold = std::sqrt(std::log(double(n)));
    int hits = 0;
    for (int trial = 0; trial < trials; ++trial) {
        for (int i = 0; i < n; ++i) {
            KeyHash h(seed);
            h.absorb(stream::trial_draw);
            h.absorb(static_cast<std::uint64_t>(trial));
            h.absorb(static_cast<std::uint64_t>(i));
            if (normal_quantile(uniform01(h.value())) >= threshold) {
                ++hits;
                break;
            }
        }
    }
    return double(hits) / double(trials);
}

struct XiStabilityReport {
    std::vector<int> J;
    std::vector<double> mean;  // sample mean of the statistic^sigma per scale
    std::vector<double> se;
    std::vector<std::vector<double>> samples;  // [scale index][trial]
    bool stable = false;        // last two means agree within 3 combined SE
    bool condition_ok = false;  // template satisfies the matching moment condition
    bool tilde = false;
};

namespace detail {

inline RawCoefficients truncate_raw(const RawCoefficients& raw, int J) {
    RawCoefficients out = raw;
    out.J_max = J;
    out.cap.resize(static_cast<std::size_t>(J) + 1);
    out.shifts.erase(out.shifts.begin() + (J + 1), out.shifts.end());
    for (auto& rows : out.xi) rows.resize(static_cast<std::size_t>(J) + 1);
    for (auto& rows : out.gate) rows.resize(static_cast<std::size_t>(J) + 1);
    return out;
}

}  // namespace detail

// Sample means of the double-sup statistic raised to sigma across nested
// truncations. Flat means across the last scales indicate a finite limiting
// moment; a drifting mean flags templates whose tails are too heavy. The
// moment condition itself is recorded, not enforced, precisely so that
// failing templates can be exhibited.
inline XiStabilityReport verify_xi_moment_stability(const PriorSpec& prior, int d, double p,
                                                    double sigma, const std::vector<int>& J_list,
                                                    int trials, std::uint64_t seed,
                                                    bool tilde = false, double r_order = 0.0,
                                                    double delta = 0.5, int threads = 1) {
    prior.validate();
    if (!(p > 0.0) || is_infinite(p))
        throw input_error("verify_xi_moment_stability: requires p in (0, inf)");
    if (!(sigma > 0.0) || is_infinite(sigma))
        throw input_error("verify_xi_moment_stability: requires sigma in (0, inf)");
    if (J_list.size() < 2) throw input_error("verify_xi_moment_stability: need at least 2 scales");
    for (std::size_t i = 0; i < J_list.size(); ++i) {
        if (J_list[i] < 0 || (i > 0 && J_list[i] <= J_list[i - 1]))
            throw input_error("verify_xi_moment_stability: scales must be increasing");
    }
    if (trials < 2) throw input_error("verify_xi_moment_stability: need at least 2 trials");
    if (tilde && !prior.gated())
        throw input_error("verify_xi_moment_stability: tilde variant needs a gated prior");

    double r = r_order > 0.0 ? r_order : p;
    XiStabilityReport out;
    out.J = J_list;
    out.tilde = tilde;
    MomentCondition cond;
    cond.kind = tilde ? MomentConditionKind::PolyMaxRP : MomentConditionKind::PolyP;
    cond.p = p;
    cond.r = r;
    out.condition_ok = template_moment_ok(prior.tmpl, cond);

    int J_top = J_list.back();
    std::vector<std::int64_t> caps = default_caps(J_top);
    ShellTable shells = ShellTable::build(d, J_top + 3);
    out.samples.assign(J_list.size(), std::vector<double>(static_cast<std::size_t>(trials)));
    detail::parallel_for(trials, threads, [&](int trial) {
        std::uint64_t sub = detail::trial_seed(seed, stream::trial_draw, trial);
        RawCoefficients raw = sample_raw(prior, d, J_top, caps, sub);
        for (std::size_t k = 0; k < J_list.size(); ++k) {
            RawCoefficients view = detail::truncate_raw(raw, J_list[k]);
            double stat = tilde ? xi_tilde_statistic(view, p, r, delta, prior.mu, prior.nu,
                                                     prior.beta, shells)
                                      .overall
                                : xi_statistic(view, p, shells).overall;
            out.samples[k][static_cast<std::size_t>(trial)] = std::pow(stat, sigma);
        }
    });
    for (const auto& col : out.samples) {
        detail::MeanSe ms = detail::mean_se(col);
        out.mean.push_back(ms.mean);
        out.se.push_back(ms.se);
    }
    std::size_t last = out.mean.size() - 1;
    double gap = std::abs(out.mean[last] - out.mean[last - 1]);
    double spread = 3.0 * std::sqrt(out.se[last] * out.se[last] +
                                    out.se[last - 1] * out.se[last - 1]);
    out.stable = gap <= spread;
    return out;
}

}  // namespace rws

#endif
