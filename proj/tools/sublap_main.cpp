// Command-line driver: one experiment per invocation, machine-readable
// artifacts plus a manifest, exit codes 0 = pass, 1 = assertion failed,
// 2 = config error, 3 = numerical failure.
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "sublap/experiment.hpp"
#include "sublap/green.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    int levels = 0;
    int jobs = 1;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "experiment config (JSON)")->required();
    cmd->add_option("--out", o.out_dir, "output directory (default: config, then $SUBLAP_OUT_DIR)");
    cmd->add_option("--seed", o.seed, "random seed override");
    cmd->add_option("--levels", o.levels, "refinement level override");
    cmd->add_option("--jobs", o.jobs, "worker threads for parallel loops");
}

int run(sublap::ExperimentKind kind, const CommonOpts& o, const CLI::App* cmd) {
    sublap::ExperimentConfig cfg;
    try {
        cfg = sublap::ExperimentConfig::from_file(o.config_path);
        if (cfg.kind_given && cfg.kind != kind)
            throw sublap::config_error("config kind '" + sublap::kind_name(cfg.kind) +
                                       "' does not match subcommand '" + sublap::kind_name(kind) +
                                       "'");
        cfg.kind = kind;
        if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
        if (cfg.out_dir.empty())
            if (const char* env = std::getenv("SUBLAP_OUT_DIR")) cfg.out_dir = env;
        if (cmd->count("--seed") > 0) cfg.seed = o.seed;
        if (o.levels > 0) cfg.levels = o.levels;
        cfg.jobs = o.jobs;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }

    try {
        sublap::ExperimentResult res = sublap::run_experiment(cfg);
        for (const auto& p : res.artifact_paths) std::printf("wrote %s\n", p.c_str());
        if (res.exit_code != 0) std::fprintf(stderr, "%s\n", res.failure.c_str());
        return res.exit_code;
    } catch (const sublap::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sublinear elliptic Dirichlet solver and potential-theory experiments"};
    app.require_subcommand(1);

    CommonOpts solve_o, kato_o, thr_o, verify_o, green_o;
    CLI::App* solve = app.add_subcommand("solve", "fixed-point solve with estimate checks");
    add_common(solve, solve_o);
    CLI::App* kato = app.add_subcommand("kato", "Kato modulus / dist^(-alpha) sweep");
    add_common(kato, kato_o);
    CLI::App* thr = app.add_subcommand("threshold", "finite-energy threshold refinement study");
    add_common(thr, thr_o);
    CLI::App* verify = app.add_subcommand("verify", "kernel and inequality invariant suite");
    add_common(verify, verify_o);
    CLI::App* green = app.add_subcommand("green-test", "Green operator convergence tests");
    add_common(green, green_o);

    CLI11_PARSE(app, argc, argv);

    if (solve->parsed()) return run(sublap::ExperimentKind::Solve, solve_o, solve);
    if (kato->parsed()) return run(sublap::ExperimentKind::Kato, kato_o, kato);
    if (thr->parsed()) return run(sublap::ExperimentKind::Threshold, thr_o, thr);
    if (verify->parsed()) return run(sublap::ExperimentKind::Verify, verify_o, verify);
    if (green->parsed()) return run(sublap::ExperimentKind::GreenTest, green_o, green);
    return 2;
}
