// rws: sample paths, sequence norms, property verdicts, convergence sweeps,
// moment/exponential-moment estimates, and numeric verifier batteries for
// the two random wavelet-series priors. Every artifact starts with a '#'
// manifest that the rerun subcommand accepts as a complete configuration.

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "rws/cli.hpp"

namespace {

struct FlagBundle {
    rws::RunConfig cfg;
    std::string family = "besov";
    std::string tmpl = "gaussian";
    std::string preset;
};

void add_prior_flags(CLI::App* sub, FlagBundle& fb) {
    sub->add_option("--family", fb.family, "prior family: besov | bernoulli-besov");
    sub->add_option("--alpha", fb.cfg.prior.alpha, "scale decay exponent");
    sub->add_option("--beta", fb.cfg.prior.beta, "spatial decay exponent, scales >= 1");
    sub->add_option("--gamma", fb.cfg.prior.gamma, "spatial decay exponent at scale 0");
    sub->add_option("--theta", fb.cfg.prior.theta, "polynomial scale factor (dense family)");
    sub->add_option("--mu", fb.cfg.prior.mu, "gate scale exponent, <= 0 (gated family)");
    sub->add_option("--nu", fb.cfg.prior.nu, "gate spatial exponent, <= 0 (gated family)");
    sub->add_option("--k", fb.cfg.prior.k, "intended wavelet smoothness order");
    sub->add_option("--template", fb.tmpl,
                    "template law: gaussian | uniform | rademacher | pareto(a) | "
                    "truncated-gaussian(R) | constant(c)");
}

void add_space_flags(CLI::App* sub, FlagBundle& fb) {
    sub->add_option("--d", fb.cfg.space.d, "spatial dimension");
    sub->add_option("--s", fb.cfg.space.s, "smoothness index");
    sub->add_option("--p", fb.cfg.space.p, "integrability exponent (inf allowed)");
    sub->add_option("--q", fb.cfg.space.q, "summability exponent (inf allowed)");
    sub->add_option("--sigma", fb.cfg.space.sigma, "weight exponent (0 = unweighted)");
}

void add_run_flags(CLI::App* sub, FlagBundle& fb) {
    sub->add_option("--J-max", fb.cfg.J_max, "truncation scale");
    sub->add_option("--cap-policy", fb.cfg.cap_policy, "shift truncation: auto | default | window");
    sub->add_option("--N", fb.cfg.N, "wavelet filter order (1..12)");
    sub->add_option("--depth", fb.cfg.depth, "dyadic refinement depth of the basis tables");
    sub->add_option("--trials", fb.cfg.trials, "Monte Carlo trial count");
    sub->add_option("--r", fb.cfg.r, "moment order");
    sub->add_option("--c", fb.cfg.c, "exponential moment coefficient");
    sub->add_option("--stat-sigma", fb.cfg.stat_sigma, "moment order of the averaged statistic");
    sub->add_option("--seed", fb.cfg.seed, "base seed (default 0; all runs reproducible)");
    sub->add_option("--threads", fb.cfg.threads, "worker threads (never affects output bytes)");
    sub->add_option("--out", fb.cfg.out, "output file (default $RWS_OUT_DIR/<name>.csv)");
}

rws::RunConfig finish(FlagBundle& fb, const std::string& command) {
    fb.cfg.command = command;
    if (fb.family == "besov")
        fb.cfg.prior.family = rws::PriorFamily::Besov;
    else if (fb.family == "bernoulli-besov")
        fb.cfg.prior.family = rws::PriorFamily::BernoulliBesov;
    else
        throw rws::input_error("unknown family '" + fb.family + "'");
    fb.cfg.prior.tmpl = rws::TemplateDistribution::parse(fb.tmpl);
    if (!fb.preset.empty()) {
        std::uint64_t seed = fb.cfg.seed;
        int threads = fb.cfg.threads;
        int points = fb.cfg.points;
        std::string out = fb.cfg.out;
        rws::apply_preset(fb.cfg, fb.preset);
        fb.cfg.seed = seed;
        fb.cfg.threads = threads;
        fb.cfg.points = points;
        fb.cfg.out = out;
    }
    return fb.cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"random wavelet series workbench"};
    app.require_subcommand(1);

    FlagBundle fb;
    std::string rerun_path;

    std::string presets;
    for (const std::string& n : rws::preset_names()) presets += (presets.empty() ? "" : " ") + n;

    CLI::App* sample = app.add_subcommand("sample", "synthesize one sample path to x,y CSV");
    add_prior_flags(sample, fb);
    add_space_flags(sample, fb);
    add_run_flags(sample, fb);
    sample->add_option("--preset", fb.preset, "figure panel, overrides prior/grid: " + presets);
    sample->add_option("--xmin", fb.cfg.xmin, "window start");
    sample->add_option("--xmax", fb.cfg.xmax, "window end");
    sample->add_option("--points", fb.cfg.points, "grid resolution");

    CLI::App* norm = app.add_subcommand("norm", "sequence norm of a sampled or explicit field");
    add_prior_flags(norm, fb);
    add_space_flags(norm, fb);
    add_run_flags(norm, fb);
    norm->add_option("--set", fb.cfg.sets,
                     "explicit coefficient j,t,m(1..d),value; repeatable, replaces sampling");

    CLI::App* check = app.add_subcommand("check", "evaluate the membership inequalities");
    add_prior_flags(check, fb);
    add_space_flags(check, fb);
    add_run_flags(check, fb);

    CLI::App* phase = app.add_subcommand("phase", "convergence classification over nested scales");
    add_prior_flags(phase, fb);
    add_space_flags(phase, fb);
    add_run_flags(phase, fb);
    phase->add_option("--J-list", fb.cfg.J_list, "scales, e.g. 4,5,...,12")->delimiter(',');

    CLI::App* moments = app.add_subcommand("moments", "Monte Carlo estimate of norm^r");
    add_prior_flags(moments, fb);
    add_space_flags(moments, fb);
    add_run_flags(moments, fb);

    CLI::App* mgf = app.add_subcommand("mgf", "exponential moment scan");
    add_prior_flags(mgf, fb);
    add_space_flags(mgf, fb);
    add_run_flags(mgf, fb);

    CLI::App* verify = app.add_subcommand("verify", "run the numeric verifier battery");
    add_prior_flags(verify, fb);
    add_space_flags(verify, fb);
    add_run_flags(verify, fb);

    CLI::App* rerun = app.add_subcommand("rerun", "re-execute a run from an artifact manifest");
    rerun->add_option("path", rerun_path, "artifact file with a '#' manifest header")->required();
    rerun->add_option("--out", fb.cfg.out, "override output file");
    rerun->add_option("--threads", fb.cfg.threads, "worker threads");

    CLI11_PARSE(app, argc, argv);

    try {
        rws::RunConfig cfg;
        if (rerun->parsed()) {
            cfg = rws::load_config(rerun_path);
            cfg.out = fb.cfg.out;
            cfg.threads = fb.cfg.threads;
        } else {
            cfg = finish(fb, app.get_subcommands().front()->get_name());
        }
        return rws::run(cfg);
    } catch (const rws::input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const rws::resource_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
