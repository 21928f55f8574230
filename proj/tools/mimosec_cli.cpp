// Command-line front end: figure / verify / simulate / thresholds / mc.
// Exit codes: 0 success, 1 check failure, 2 invalid input.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "mimosec/runner.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    bool seed_set = false;
    long long trials = 0;
    bool trials_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "JSON config file");
    cmd->add_option("--out", opts.out_path, "output file (default: stdout)");
    cmd->add_option("--set", opts.overrides, "config override, section.key=value")
        ->take_all();
    cmd->add_option("--seed", opts.seed, "master seed (overrides mc.seed)")
        ->each([&](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--trials", opts.trials, "trial/block count (overrides mc.trials)")
        ->each([&](const std::string&) { opts.trials_set = true; });
}

nlohmann::json effective_config(const CommonOpts& opts) {
    nlohmann::json config = mimosec::default_config();
    if (!opts.config_path.empty())
        config.merge_patch(mimosec::load_config_file(opts.config_path));
    for (const auto& o : opts.overrides) mimosec::apply_override(config, o);
    if (opts.seed_set) config["mc"]["seed"] = opts.seed;
    if (opts.trials_set) config["mc"]["trials"] = opts.trials;
    return config;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw mimosec::ParameterError("cannot open output file: " + out_path);
    f << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"massive-MIMO downlink security lab"};
    app.require_subcommand(1);

    CommonOpts fig_opts, ver_opts, sim_opts, thr_opts, mc_opts;
    int figure_id = 2;
    std::string suite = "all";
    int workers = 1;
    std::string experiment = "moments";

    auto* fig = app.add_subcommand("figure", "analytic curve sweeps (ids 2-6)");
    fig->add_option("--id", figure_id, "figure id")->required()->check(CLI::Range(2, 6));
    fig->add_option("--workers", workers, "sweep-point worker threads");
    add_common(fig, fig_opts);

    auto* ver = app.add_subcommand("verify", "formula and statistics self-checks");
    ver->add_option("--suite", suite, "formulas | statistics | all");
    ver->add_option("--workers", workers, "check worker threads");
    add_common(ver, ver_opts);

    auto* sim = app.add_subcommand("simulate", "end-to-end block simulation");
    add_common(sim, sim_opts);

    auto* thr = app.add_subcommand("thresholds", "antenna thresholds for a config");
    add_common(thr, thr_opts);

    auto* mc = app.add_subcommand("mc", "named Monte-Carlo experiment");
    mc->add_option("--experiment", experiment,
                   "moments | sinr | leakage | lln | identity | waterfilling | end_to_end");
    add_common(mc, mc_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        app.exit(e);
        return 2;
    }

    try {
        if (fig->parsed()) {
            const std::uint64_t seed = fig_opts.seed_set ? fig_opts.seed : 1;
            const auto table =
                mimosec::run_figure(figure_id, fig_opts.overrides, seed, workers);
            emit(mimosec::render_csv(table), fig_opts.out_path);
        } else if (ver->parsed()) {
            const std::uint64_t seed = ver_opts.seed_set ? ver_opts.seed : 1;
            const auto report = mimosec::run_verify(suite, seed, workers);
            emit(mimosec::render_report(report), ver_opts.out_path);
            if (!report.all_pass) return 1;
        } else if (sim->parsed()) {
            const auto config = effective_config(sim_opts);
            const auto setup = mimosec::parse_config(config);
            const auto table = mimosec::run_simulate(setup, setup.trials, config);
            emit(mimosec::render_csv(table), sim_opts.out_path);
        } else if (thr->parsed()) {
            const auto config = effective_config(thr_opts);
            const auto setup = mimosec::parse_config(config);
            const auto table = mimosec::run_thresholds(setup, config);
            emit(mimosec::render_csv(table), thr_opts.out_path);
        } else if (mc->parsed()) {
            const auto config = effective_config(mc_opts);
            const auto setup = mimosec::parse_config(config);
            const auto table =
                mimosec::run_mc(setup, experiment, setup.trials, config);
            emit(mimosec::render_csv(table), mc_opts.out_path);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
