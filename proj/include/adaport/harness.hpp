#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "adaport/core.hpp"
#include "adaport/environments.hpp"
#include "adaport/policies.hpp"
#include "adaport/traces.hpp"

namespace adaport::harness {

struct PolicySpec {
    std::string name;
    FeedbackModel model = FeedbackModel::TwoFB;
};

// Throws std::invalid_argument when the registry does not know the policy
// or the policy cannot learn from the given feedback model.
void check_compatible(const PolicySpec& spec);

// Builds a fresh environment for a replication seed.
using EnvFactory = std::function<std::unique_ptr<Environment>(std::uint64_t seed)>;

// Plays `horizon` rounds. The policy sees only make_view(model, ...).
// Policy randomness comes from make_rng(seed, 1).
RunResult run_replication(Environment& env, Policy& policy, FeedbackModel model, std::size_t horizon,
                          std::uint64_t seed);

struct RunOptions {
    std::size_t horizon = 0;
    std::size_t replications = 1;
    std::uint64_t base_seed = 0;
    unsigned threads = 0;  // 0: hardware concurrency
    std::optional<double> exp3_gamma;
};

// Replication r uses seed base_seed + r; results come back in replication
// order regardless of thread count.
std::vector<RunResult> run_replications(const EnvFactory& make_env, const PolicySpec& spec, const RunOptions& opts);

struct MetricsSummary {
    std::string policy;
    FeedbackModel model = FeedbackModel::TwoFB;
    std::size_t replications = 0;

    std::vector<double> mean_regret;  // index t-1 holds R(t)
    std::vector<double> stderr_regret;
    std::vector<double> mean_failed;

    // Mean relative throughput degradation versus the oracle; nullopt when
    // every replication was excluded for an oracle with zero failures.
    std::optional<double> relative_degradation;
    std::size_t degradation_excluded = 0;

    std::vector<std::size_t> checkpoints;  // strictly increasing, ends at T
    std::vector<double> regret_over_log_t;
    std::vector<double> mean_pulls;

    std::size_t horizon() const { return mean_regret.size(); }
};

// Log-spaced timeslots in [2, horizon], always including horizon.
std::vector<std::size_t> log_checkpoints(std::size_t horizon, std::size_t per_decade = 10);

// `oracle` holds either one result (shared by every replication, as in
// deterministic trace replay) or one result per replication.
MetricsSummary aggregate(std::span<const RunResult> results, std::span<const RunResult> oracle);

// (R(t2) - R(t1)) / (ln t2 - ln t1), needs 1 <= t1 < t2 <= horizon.
double regret_slope(const MetricsSummary& summary, std::size_t t1, std::size_t t2);

// ---------------------------------------------------------------------------
// Config-driven experiments.

struct SyntheticSpec {
    BernoulliInstance instance;
    bool correlated = false;
};

struct TraceSpec {
    std::vector<traces::HeadPoseSample> poses;
    std::vector<traces::BandwidthSample> bandwidth;
    std::vector<traces::PortionSpec> portions;
    double interval_s = traces::kDefaultIntervalSeconds;
};

struct ExperimentConfig {
    std::optional<SyntheticSpec> synthetic;
    std::optional<TraceSpec> trace;
    std::vector<PolicySpec> policies;
    std::size_t horizon = 30000;
    std::size_t replications = 50;
    std::uint64_t base_seed = 1;
    std::filesystem::path output = "out";
    std::optional<std::pair<std::size_t, std::size_t>> slope_window;
    unsigned threads = 0;
    std::optional<double> exp3_gamma;
    bool svg = true;
};

// Parses the JSON config; relative file paths resolve against `base_dir`.
ExperimentConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

struct ExperimentReport {
    std::vector<MetricsSummary> policies;
    MetricsSummary oracle;
    std::pair<std::size_t, std::size_t> slope_window;
    std::vector<double> slopes;  // one per policy
};

// Synthetic experiments get a SyntheticEnv per seed; trace experiments
// build the matrices once and replay them.
EnvFactory make_env_factory(const ExperimentConfig& config);

ExperimentReport run_experiment(const ExperimentConfig& config);

// Writes <policy>.csv (t,mean_regret,stderr,mean_failed) per policy, the
// oracle's curve, summary.csv and, when enabled, regret.svg.
void write_report(const ExperimentReport& report, const ExperimentConfig& config);

void write_curve_csv(std::ostream& out, const MetricsSummary& summary);
void write_summary_csv(std::ostream& out, const ExperimentReport& report);
void write_regret_svg(std::ostream& out, std::span<const MetricsSummary> curves);

}  // namespace adaport::harness
