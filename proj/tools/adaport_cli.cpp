// adaport: lower-bound sweeps, synthetic and trace-driven bandit experiments.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "adaport/harness.hpp"
#include "adaport/theory.hpp"
#include "adaport/traces.hpp"

namespace {

using namespace adaport;

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> horizon;
    std::optional<std::size_t> reps;
    std::optional<std::string> out;
};

void add_common(CLI::App* cmd, Overrides& o)
{
    cmd->add_option("--config", o.config, "JSON experiment config")->required()->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "base seed (replication r uses seed + r)");
    cmd->add_option("--horizon", o.horizon, "timeslots per replication");
    cmd->add_option("--reps", o.reps, "number of replications");
    cmd->add_option("--out", o.out, "output directory");
}

harness::ExperimentConfig load(const Overrides& o)
{
    auto cfg = harness::load_config(o.config);
    if (o.seed)
        cfg.base_seed = *o.seed;
    if (o.horizon)
        cfg.horizon = *o.horizon;
    if (o.reps)
        cfg.replications = *o.reps;
    if (o.out)
        cfg.output = *o.out;
    return cfg;
}

void run_and_report(const harness::ExperimentConfig& cfg)
{
    const auto report = harness::run_experiment(cfg);
    harness::write_report(report, cfg);
    std::cout << std::left << std::setw(10) << "policy" << std::setw(8) << "model" << std::setw(14) << "regret(T)"
              << std::setw(14) << "degradation" << "slope\n";
    for (std::size_t k = 0; k < report.policies.size(); ++k) {
        const auto& s = report.policies[k];
        std::ostringstream deg;
        if (s.relative_degradation)
            deg << std::setprecision(4) << *s.relative_degradation;
        else
            deg << "undefined";
        std::cout << std::setw(10) << s.policy << std::setw(8) << to_string(s.model) << std::setw(14)
                  << s.mean_regret.back() << std::setw(14) << deg.str() << report.slopes[k] << '\n';
    }
    std::cout << "wrote " << cfg.output.string() << " (" << cfg.replications << " replications, T = " << cfg.horizon
              << ")\n";
}

std::ofstream open_out(const std::string& path)
{
    std::ofstream f(path);
    if (!f)
        throw std::runtime_error("cannot write " + path);
    return f;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hybrid-feedback portion selection: bounds, simulations and trace replay"};
    app.require_subcommand(1);

    // bounds
    auto* bounds = app.add_subcommand("bounds", "lower-bound constants for two-arm sweeps (CSV)");
    std::string panel = "a";
    std::string sweep_config;
    std::string bounds_out;
    bool log2 = false;
    bounds->add_option("--figure", panel, "built-in sweep: a (vary alpha) or b (vary beta)")
        ->check(CLI::IsMember({"a", "b"}));
    bounds->add_option("--config", sweep_config,
                       "JSON {\"optimal\": {\"alpha\", \"beta\"}, \"grid\": [{\"alpha\", \"beta\"}, ...]}")
        ->check(CLI::ExistingFile);
    bounds->add_option("--out", bounds_out, "CSV path (default: stdout)");
    bounds->add_flag("--log2", log2, "report constants in log2 units instead of nats");

    Overrides sim_o, trace_o, mat_o;
    auto* simulate = app.add_subcommand("simulate", "synthetic Bernoulli experiments");
    add_common(simulate, sim_o);
    auto* trace_run = app.add_subcommand("trace-run", "trace-driven experiments");
    add_common(trace_run, trace_o);

    auto* matrices = app.add_subcommand("matrices", "emit the feedback matrices a trace config produces");
    matrices->add_option("--config", mat_o.config, "JSON trace config")->required()->check(CLI::ExistingFile);
    matrices->add_option("--horizon", mat_o.horizon, "rows to build");
    matrices->add_option("--out", mat_o.out, "CSV path (default: stdout)");

    auto* synth = app.add_subcommand("synth-trace", "generate a synthetic head-motion or bandwidth trace CSV");
    std::string kind = "pose";
    std::size_t length = 3000;
    double rate = 150.0;
    std::uint64_t synth_seed = 1;
    std::string synth_out;
    synth->add_option("--kind", kind, "pose or bandwidth")->check(CLI::IsMember({"pose", "bandwidth"}));
    synth->add_option("--length", length, "samples");
    synth->add_option("--rate", rate, "sending rate in Mbps (bandwidth only)");
    synth->add_option("--seed", synth_seed, "generator seed");
    synth->add_option("--out", synth_out, "CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*bounds) {
            theory::RatePair optimal = theory::kFigureOptimalArm;
            std::vector<theory::RatePair> grid = theory::figure_grid(panel[0]);
            if (!sweep_config.empty()) {
                std::ifstream in(sweep_config);
                const auto doc = nlohmann::json::parse(in);
                optimal = {doc.at("optimal").at("alpha").get<double>(), doc.at("optimal").at("beta").get<double>()};
                grid.clear();
                for (const auto& g : doc.at("grid"))
                    grid.push_back({g.at("alpha").get<double>(), g.at("beta").get<double>()});
            }
            const auto rows = theory::sweep_two_arm(optimal, grid);
            if (bounds_out.empty()) {
                theory::write_sweep_csv(std::cout, rows, log2);
            } else {
                auto f = open_out(bounds_out);
                theory::write_sweep_csv(f, rows, log2);
            }
        } else if (*simulate) {
            const auto cfg = load(sim_o);
            if (!cfg.synthetic)
                throw std::invalid_argument("simulate needs a synthetic environment config");
            run_and_report(cfg);
        } else if (*trace_run) {
            const auto cfg = load(trace_o);
            if (!cfg.trace)
                throw std::invalid_argument("trace-run needs a trace environment config");
            run_and_report(cfg);
        } else if (*matrices) {
            const auto cfg = load(mat_o);
            if (!cfg.trace)
                throw std::invalid_argument("matrices needs a trace environment config");
            const auto& t = *cfg.trace;
            const auto m = traces::build_matrices(t.poses, t.bandwidth, t.portions, cfg.horizon, t.interval_s);
            if (!mat_o.out) {
                traces::write_matrices_csv(std::cout, m);
            } else {
                auto f = open_out(*mat_o.out);
                traces::write_matrices_csv(f, m);
            }
        } else if (*synth) {
            auto f = open_out(synth_out);
            if (kind == "pose")
                traces::write_pose_csv(f, traces::synthesize_head_motion(length, synth_seed));
            else
                traces::write_bandwidth_csv(f, traces::synthesize_bandwidth(length, rate, synth_seed));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
