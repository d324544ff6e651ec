#ifndef RWS_CLI_HPP
#define RWS_CLI_HPP

// Command front end shared by the rws binary and the tests: a RunConfig
// that round-trips through the '#' manifest header of every artifact, panel
// presets, and one handler per command. Thread count is deliberately left
// out of the manifests; it must never change the bytes written.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "conditions.hpp"
#include "wavelets.hpp"

namespace rws {

struct RunConfig {
    std::string command = "sample";
    std::string preset;  // informational; also names the default output file
    PriorSpec prior;
    SpaceSpec space;
    int J_max = 10;
    std::string cap_policy = "auto";  // auto | default | window
    int N = 10;                       // wavelet order
    int depth = 10;                   // cascade depth
    double xmin = -25.0;
    double xmax = 25.0;
    int points = 2001;
    std::vector<int> J_list;  // phase scales; empty = 4..12
    int trials = 50;
    double r = 2.0;          // moment order
    double c = 1.0;          // exponential coefficient
    double stat_sigma = 1.0; // moment order for the averaged-statistic check
    std::uint64_t seed = 0;
    int threads = 1;    // execution detail, not part of the manifest
    std::string out;    // output path; empty = RWS_OUT_DIR or cwd
    std::vector<std::string> sets;  // explicit coefficients "j,t,m..,value"

    Manifest to_manifest() const {
        Manifest m;
        m.set("command", command);
        if (!preset.empty()) m.set("preset", preset);
        prior.to_manifest(m);
        m.set("d", space.d);
        space.to_manifest(m);
        m.set("J_max", J_max);
        m.set("cap-policy", cap_policy);
        m.set("N", N);
        m.set("depth", depth);
        m.set("xmin", xmin);
        m.set("xmax", xmax);
        m.set("points", points);
        std::string jl;
        for (std::size_t i = 0; i < J_list.size(); ++i)
            jl += (i ? ";" : "") + std::to_string(J_list[i]);
        m.set("J-list", jl);
        m.set("trials", trials);
        m.set("r", r);
        m.set("c", c);
        m.set("stat-sigma", stat_sigma);
        m.set("seed", static_cast<unsigned long long>(seed));
        for (std::size_t i = 0; i < sets.size(); ++i)
            m.set("set" + std::to_string(i), sets[i]);
        return m;
    }

    static RunConfig from_manifest(const Manifest& m) {
        RunConfig c;
        c.command = m.get("command");
        c.preset = m.get_or("preset", "");
        c.prior = PriorSpec::from_manifest(m);
        c.space = SpaceSpec::from_manifest(m, static_cast<int>(m.get_int("d")));
        c.J_max = static_cast<int>(m.get_int("J_max"));
        c.cap_policy = m.get("cap-policy");
        c.N = static_cast<int>(m.get_int("N"));
        c.depth = static_cast<int>(m.get_int("depth"));
        c.xmin = m.get_number("xmin");
        c.xmax = m.get_number("xmax");
        c.points = static_cast<int>(m.get_int("points"));
        c.J_list.clear();
        std::stringstream jl(m.get("J-list"));
        std::string tok;
        while (std::getline(jl, tok, ';'))
            if (!tok.empty()) c.J_list.push_back(std::stoi(tok));
        c.trials = static_cast<int>(m.get_int("trials"));
        c.r = m.get_number("r");
        c.c = m.get_number("c");
        c.stat_sigma = m.get_number("stat-sigma");
        c.seed = std::stoull(m.get("seed"));
        for (std::size_t i = 0; m.has("set" + std::to_string(i)); ++i)
            c.sets.push_back(m.get("set" + std::to_string(i)));
        return c;
    }
};

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {
        "besov00",     "besov01",     "besov02",     "besov10",     "besov11",     "besov12",
        "bernoulli00", "bernoulli01", "bernoulli02", "bernoulli10", "bernoulli11", "bernoulli12"};
    return names;
}

// The twelve sample-path panels. The dense panels share theta = 0 and vary
// the spatial exponents (first row) or the scale exponent (second row); the
// gated panels fix alpha = gamma = beta = -1/2 and vary the gate exponents.
inline void apply_preset(RunConfig& cfg, const std::string& name) {
    cfg.preset = name;
    cfg.command = "sample";
    cfg.space = SpaceSpec{};
    cfg.space.d = 1;
    cfg.J_max = 10;
    cfg.N = 10;
    cfg.depth = 10;
    cfg.xmin = -25.0;
    cfg.xmax = 25.0;
    cfg.cap_policy = "window";
    cfg.prior = PriorSpec{};
    cfg.prior.tmpl = TemplateDistribution::gaussian();
    auto dense = [&](double bg, double a) {
        cfg.prior.family = PriorFamily::Besov;
        cfg.prior.beta = bg;
        cfg.prior.gamma = bg;
        cfg.prior.alpha = a;
        cfg.prior.theta = 0.0;
    };
    auto gated = [&](double nu, double mu) {
        cfg.prior.family = PriorFamily::BernoulliBesov;
        cfg.prior.alpha = -0.5;
        cfg.prior.beta = -0.5;
        cfg.prior.gamma = -0.5;
        cfg.prior.nu = nu;
        cfg.prior.mu = mu;
    };
    if (name == "besov00") dense(-1, -1);
    else if (name == "besov01") dense(-2, -1);
    else if (name == "besov02") dense(-4, -1);
    else if (name == "besov10") dense(-1, -1);
    else if (name == "besov11") dense(-1, -2);
    else if (name == "besov12") dense(-1, -4);
    else if (name == "bernoulli00") gated(-1, 0);
    else if (name == "bernoulli01") gated(-2, 0);
    else if (name == "bernoulli02") gated(-4, 0);
    else if (name == "bernoulli10") gated(0, -1);
    else if (name == "bernoulli11") gated(0, -2);
    else if (name == "bernoulli12") gated(0, -4);
    else throw input_error("unknown preset '" + name + "'");
}

namespace detail {

inline std::string resolve_out(const RunConfig& cfg) {
    if (!cfg.out.empty()) return cfg.out;
    const char* dir = std::getenv("RWS_OUT_DIR");
    std::string base = cfg.preset.empty() ? cfg.command : cfg.preset;
    return (dir && *dir ? std::string(dir) : std::string(".")) + "/" + base + ".csv";
}

inline std::size_t write_rows(const std::string& path, const Manifest& man,
                              const std::vector<std::vector<double>>& rows) {
    std::ofstream os(path);
    if (!os) throw resource_error("cannot open output file: " + path);
    std::size_t i = 0;
    return emit_csv(os, man, [&](std::vector<double>& row) {
        if (i == rows.size()) return false;
        row = rows[i++];
        return true;
    });
}

// Truncation caps: "window" covers the synthesis interval at every scale,
// "default" is the sampling policy used by the estimators.
inline std::vector<std::int64_t> resolve_caps(const RunConfig& cfg) {
    std::string policy = cfg.cap_policy;
    if (policy == "auto") policy = cfg.command == "sample" ? "window" : "default";
    if (policy == "default") return default_caps(cfg.J_max);
    if (policy != "window") throw input_error("unknown cap policy '" + cfg.cap_policy + "'");
    double span = std::max(std::abs(cfg.xmin), std::abs(cfg.xmax));
    std::vector<std::int64_t> caps;
    for (int j = 0; j <= cfg.J_max; ++j) {
        double argscale = j == 0 ? 1.0 : pow2(j - 1);
        auto c = static_cast<std::int64_t>(std::ceil(span * argscale)) + 2 * cfg.N;
        caps.push_back(std::max<std::int64_t>(c, 32));
    }
    return caps;
}

inline std::pair<BasisIndex, double> parse_set(const std::string& text, int d) {
    std::vector<double> nums;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) nums.push_back(parse_number(tok));
    if (nums.size() != static_cast<std::size_t>(d) + 3)
        throw input_error("explicit coefficient needs j,t,m(1..d),value: '" + text + "'");
    BasisIndex idx;
    idx.j = static_cast<int>(nums[0]);
    idx.t = static_cast<unsigned>(nums[1]);
    idx.m.assign(nums.begin() + 2, nums.end() - 1);
    idx.validate();
    return {idx, nums.back()};
}

inline std::string verdict_line(const PropertyVerdict& v) {
    return std::string(v.holds ? "holds" : "violated") + " (" + v.branch + ")";
}

}  // namespace detail

inline int run_sample(const RunConfig& cfg, std::ostream& log) {
    if (cfg.space.d != 1) throw input_error("sample: requires d = 1");
    if (!(cfg.xmin < cfg.xmax)) throw input_error("sample: requires xmin < xmax");
    if (cfg.points < 2) throw input_error("sample: needs at least 2 grid points");
    WaveletSystem sys = cascade(scaling_filter(cfg.N), cfg.depth, 1, cfg.N);
    CoefficientField field =
        sample_field(cfg.prior, 1, cfg.J_max, detail::resolve_caps(cfg), cfg.seed);

    std::vector<double> xs(static_cast<std::size_t>(cfg.points));
    std::vector<double> ys(static_cast<std::size_t>(cfg.points));
    double step = (cfg.xmax - cfg.xmin) / double(cfg.points - 1);
    detail::parallel_for(cfg.points, cfg.threads, [&](int i) {
        xs[static_cast<std::size_t>(i)] = cfg.xmin + double(i) * step;
        std::vector<std::vector<double>> pt{{xs[static_cast<std::size_t>(i)]}};
        ys[static_cast<std::size_t>(i)] = synthesize(sys, field, pt)[0];
    });

    Manifest man = cfg.to_manifest();
    PropertyVerdict smooth = property_b_prime(1, cfg.space.p, cfg.prior.alpha, cfg.N);
    man.set("property-b-prime", detail::verdict_line(smooth));
    PropertyVerdict order = property_b(cfg.space, cfg.N);
    man.set("property-b", detail::verdict_line(order));
    if (!smooth.holds || !order.holds)
        log << "warning: wavelet order N=" << cfg.N
            << " does not certify the requested regularity\n";

    std::vector<std::vector<double>> rows;
    for (int i = 0; i < cfg.points; ++i)
        rows.push_back({xs[static_cast<std::size_t>(i)], ys[static_cast<std::size_t>(i)]});
    std::string path = detail::resolve_out(cfg);
    detail::write_rows(path, man, rows);
    log << "sample: wrote " << cfg.points << " points to " << path << "\n";
    return 0;
}

inline int run_norm(const RunConfig& cfg, std::ostream& log) {
    CoefficientField field = [&] {
        if (cfg.sets.empty())
            return sample_field(cfg.prior, cfg.space.d, cfg.J_max, detail::resolve_caps(cfg),
                                cfg.seed);
        CoefficientField f(cfg.space.d, cfg.J_max, detail::resolve_caps(cfg));
        for (const std::string& s : cfg.sets) {
            auto [idx, v] = detail::parse_set(s, cfg.space.d);
            f.set_value(idx, v);
        }
        return f;
    }();
    NormReport rep = seq_norm(field, cfg.space);
    Manifest man = cfg.to_manifest();
    man.set("total", rep.total);
    man.set("eta1", rep.eta1);
    man.set("eta2", rep.eta2);
    std::vector<std::vector<double>> rows;
    for (const LevelContribution& lc : rep.per_level)
        rows.push_back({double(lc.j), double(lc.t), lc.level, lc.weighted});
    std::string path = detail::resolve_out(cfg);
    detail::write_rows(path, man, rows);
    log << format_number(rep.total) << "\n";
    return 0;
}

inline int run_check(const RunConfig& cfg, std::ostream& log) {
    std::vector<std::pair<std::string, PropertyVerdict>> verdicts;
    if (cfg.prior.gated()) {
        verdicts.emplace_back("property-a-prime", property_a_prime(cfg.space, cfg.prior));
        verdicts.emplace_back("property-a-dprime",
                              property_a_dprime(cfg.space, cfg.prior, cfg.r));
    } else {
        verdicts.emplace_back("property-a", property_a(cfg.space, cfg.prior));
    }
    verdicts.emplace_back("property-b", property_b(cfg.space, cfg.prior.k));
    verdicts.emplace_back("property-b-prime",
                          property_b_prime(cfg.space.d, cfg.space.p, cfg.prior.alpha, cfg.prior.k));

    Manifest man = cfg.to_manifest();
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        const auto& [name, v] = verdicts[i];
        man.set(name, detail::verdict_line(v));
        log << name << ":\n" << v.render();
        for (std::size_t k = 0; k < v.margins.size(); ++k) {
            const InequalityMargin& m = v.margins[k];
            rows.push_back({double(i), double(k), m.slack, m.satisfied ? 1.0 : 0.0,
                            m.exact ? 1.0 : 0.0});
        }
    }
    std::string path = detail::resolve_out(cfg);
    detail::write_rows(path, man, rows);
    log << "check: wrote margins to " << path << "\n";
    return 0;
}

inline int run_phase(const RunConfig& cfg, std::ostream& log) {
    std::vector<int> J_list = cfg.J_list;
    if (J_list.empty())
        for (int j = 4; j <= 12; ++j) J_list.push_back(j);
    PhaseVerdict v = phase_classify(cfg.prior, cfg.space, J_list, cfg.trials, cfg.seed,
                                    cfg.threads);
    Manifest man = cfg.to_manifest();
    man.set("classification", to_string(v.classification));
    man.set("slope", v.slope);
    man.set("secondary-score", v.secondary_score);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < v.per_trial.size(); ++i)
        rows.push_back({double(i), v.per_trial[i]});
    std::string path = detail::resolve_out(cfg);
    detail::write_rows(path, man, rows);
    log << "phase: " << to_string(v.classification) << " (median slope "
        << format_number(v.slope) << ", log score " << format_number(v.secondary_score) << ")\n";
    return 0;
}

inline int run_moments(const RunConfig& cfg, std::ostream& log) {
    MomentEstimate est =
        estimate_moment(cfg.prior, cfg.space, cfg.r, cfg.trials, cfg.J_max, cfg.seed, cfg.threads);
    Manifest man = cfg.to_manifest();
    man.set("mean", est.mean);
    man.set("se", est.se);
    man.set("max-to-sum", est.max_to_sum);
    man.set("heavy-tail", est.heavy_tail ? 1 : 0);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < est.samples.size(); ++i)
        rows.push_back({double(i), est.samples[i]});
    std::string path = detail::resolve_out(cfg);
    detail::write_rows(path, man, rows);
    log << "moment mean " << format_number(est.mean) << " (se " << format_number(est.se) << ")"
        << (est.heavy_tail ? " heavy-tail flagged" : "") << "\n";
    return 0;
}

inline int run_mgf(const RunConfig& cfg, std::ostream& log) {
    std::vector<MgfEstimate> scan =
        mgf_scan(cfg.prior, cfg.space, cfg.c, cfg.r, cfg.trials, cfg.J_max, cfg.seed, 60,
                 cfg.threads);
    const MgfEstimate& last = scan.back();
    Manifest man = cfg.to_manifest();
    man.set("final-c", last.c);
    man.set("overflow", last.overflow ? 1 : 0);
    man.set("mean", last.mean);
    man.set("se", last.se);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < scan.size(); ++i)
        rows.push_back({double(i), scan[i].c, scan[i].overflow ? 1.0 : 0.0, scan[i].mean,
                        scan[i].se});
    std::string path = detail::resolve_out(cfg);
    detail::write_rows(path, man, rows);
    if (last.overflow)
        log << "mgf: overflow down to c=" << format_number(last.c) << "\n";
    else
        log << "mgf: mean " << format_number(last.mean) << " at c=" << format_number(last.c)
            << "\n";
    return 0;
}

inline int run_verify(const RunConfig& cfg, std::ostream& log) {
    std::vector<std::vector<double>> rows;  // (index, value, pass)
    bool all_ok = true;
    auto record = [&](double value, bool ok) {
        rows.push_back({double(rows.size()), value, ok ? 1.0 : 0.0});
        all_ok = all_ok && ok;
    };

    // Anti-concentration slack on keyed random finite distributions.
    double min_slack = inf;
    for (int i = 0; i < 500; ++i) {
        KeyHash h(cfg.seed);
        h.absorb(0x7061a3c2u);
        h.absorb(static_cast<std::uint64_t>(i));
        std::uint64_t base = h.value();
        int n = 2 + static_cast<int>(mix64(base) % 5);
        std::vector<double> val, pr;
        for (int k = 0; k < n; ++k) {
            val.push_back(8.0 * uniform01(mix64(base + 2 * k + 1)));
            pr.push_back(uniform01(mix64(base + 2 * k + 2)) + 1e-3);
        }
        double sg = uniform01(mix64(base + 1000));
        min_slack = std::min(min_slack, verify_paley_zygmund(val, pr, sg));
    }
    record(min_slack, min_slack >= -1e-12);

    // Binomial moment ratio at the variance order and a spread of others.
    double worst2 = 0.0, worst_any = 0.0;
    for (int n : {2, 8, 32, 64}) {
        for (double rho : {0.01, 0.1, 0.5, 0.9}) {
            worst2 = std::max(worst2, verify_binomial_bound(n, rho, 2.0));
            for (double sg : {0.5, 1.5, 3.0})
                worst_any = std::max(worst_any, verify_binomial_bound(n, rho, sg));
        }
    }
    record(worst2, worst2 <= 2.0);
    record(worst_any, worst_any <= 16.0);

    // Sup of keyed normals against the logarithmic threshold.
    double frac = verify_sup_gaussian(4096, 300, cfg.seed);
    record(frac, frac >= 0.95);

    // Stability of the averaged statistic across nested truncations.
    PriorSpec gauss;
    gauss.alpha = -1.0;
    gauss.beta = -1.0;
    gauss.gamma = -1.0;
    XiStabilityReport xr =
        verify_xi_moment_stability(gauss, 1, 2.0, cfg.stat_sigma, {2, 3}, 20, cfg.seed);
    record(xr.mean.back(), xr.stable);

    Manifest man = cfg.to_manifest();
    man.set("verify-pass", all_ok ? 1 : 0);
    std::string path = detail::resolve_out(cfg);
    detail::write_rows(path, man, rows);
    log << "verify: " << (all_ok ? "all checks passed" : "CHECK FAILED") << "\n";
    return all_ok ? 0 : 1;
}

inline int run(const RunConfig& cfg, std::ostream& log = std::cout) {
    cfg.prior.validate();
    cfg.space.validate();
    if (cfg.J_max < 0) throw input_error("run: J_max must be >= 0");
    if (cfg.threads < 1) throw input_error("run: threads must be >= 1");
    if (cfg.command == "sample") return run_sample(cfg, log);
    if (cfg.command == "norm") return run_norm(cfg, log);
    if (cfg.command == "check") return run_check(cfg, log);
    if (cfg.command == "phase") return run_phase(cfg, log);
    if (cfg.command == "moments") return run_moments(cfg, log);
    if (cfg.command == "mgf") return run_mgf(cfg, log);
    if (cfg.command == "verify") return run_verify(cfg, log);
    throw input_error("unknown command '" + cfg.command + "'");
}

// Closure: any artifact's manifest is a complete RunConfig.
inline RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw resource_error("cannot open " + path);
    return RunConfig::from_manifest(Manifest::parse(is));
}

}  // namespace rws

#endif
