#include "adaport/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace adaport::harness {

void check_compatible(const PolicySpec& spec)
{
    const auto& names = policy_names();
    if (std::find(names.begin(), names.end(), spec.name) == names.end())
        throw std::invalid_argument("unknown policy: " + spec.name);
    PolicyContext ctx;
    ctx.arms = 2;
    ctx.oracle = 0;
    if (!make_policy(spec.name, ctx)->accepts(spec.model))
        throw std::invalid_argument("policy " + spec.name + " cannot run under " + std::string(to_string(spec.model)) +
                                    " feedback");
}

RunResult run_replication(Environment& env, Policy& policy, FeedbackModel model, std::size_t horizon,
                          std::uint64_t seed)
{
    if (!policy.accepts(model))
        throw std::invalid_argument("policy " + std::string(policy.name()) + " cannot run under " +
                                    std::string(to_string(model)) + " feedback");

    Rng rng = make_rng(seed, 1);
    RunResult out;
    out.seed = seed;
    out.cumulative_regret.resize(horizon);
    out.failed_deliveries.resize(horizon);
    out.arm_pull_counts.assign(env.arms(), 0);

    double regret = 0.0;
    std::uint64_t failed = 0;
    for (std::size_t k = 0; k < horizon; ++k) {
        const Arm chosen = policy.select(rng);
        if (chosen >= env.arms())
            throw std::logic_error("policy selected an arm out of range");
        auto round = env.next();
        if (!round)
            throw std::runtime_error("environment exhausted before the horizon");

        regret += env.regret(*round, chosen);
        failed += round->reward(chosen) ? 0 : 1;
        ++out.arm_pull_counts[chosen];
        out.cumulative_regret[k] = regret;
        out.failed_deliveries[k] = failed;

        policy.observe(make_view(model, *round, chosen));
    }
    return out;
}

std::vector<RunResult> run_replications(const EnvFactory& make_env, const PolicySpec& spec, const RunOptions& opts)
{
    check_compatible(spec);
    std::vector<RunResult> results(opts.replications);

    auto run_one = [&](std::size_t r) {
        const std::uint64_t seed = opts.base_seed + r;
        auto env = make_env(seed);
        PolicyContext ctx;
        ctx.arms = env->arms();
        ctx.horizon = opts.horizon;
        ctx.oracle = env->oracle();
        ctx.exp3_gamma = opts.exp3_gamma;
        auto policy = make_policy(spec.name, ctx);
        results[r] = run_replication(*env, *policy, spec.model, opts.horizon, seed);
    };

    unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, opts.replications));
    if (threads <= 1) {
        for (std::size_t r = 0; r < opts.replications; ++r)
            run_one(r);
        return results;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t r = next++; r < opts.replications; r = next++)
                    run_one(r);
            } catch (...) {
                errors[w] = std::current_exception();
                next = opts.replications;
            }
        });
    }
    for (auto& t : pool)
        t.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return results;
}

std::vector<std::size_t> log_checkpoints(std::size_t horizon, std::size_t per_decade)
{
    std::vector<std::size_t> out;
    if (horizon < 2)
        return out;
    for (std::size_t k = 0;; ++k) {
        const double v = 2.0 * std::pow(10.0, static_cast<double>(k) / static_cast<double>(per_decade));
        const auto t = static_cast<std::size_t>(std::llround(v));
        if (t >= horizon)
            break;
        if (out.empty() || t > out.back())
            out.push_back(t);
    }
    out.push_back(horizon);
    return out;
}

MetricsSummary aggregate(std::span<const RunResult> results, std::span<const RunResult> oracle)
{
    if (results.empty())
        throw std::invalid_argument("aggregate needs at least one result");
    if (oracle.size() != 1 && oracle.size() != results.size())
        throw std::invalid_argument("oracle results must be one shared run or one per replication");
    const std::size_t horizon = results.front().horizon();
    const std::size_t arms = results.front().arm_pull_counts.size();
    for (const auto& r : results)
        if (r.horizon() != horizon || r.arm_pull_counts.size() != arms)
            throw std::invalid_argument("results differ in horizon or arm count");
    for (const auto& o : oracle)
        if (o.horizon() != horizon)
            throw std::invalid_argument("oracle horizon differs");

    const double n = static_cast<double>(results.size());
    MetricsSummary s;
    s.replications = results.size();
    s.mean_regret.assign(horizon, 0.0);
    s.stderr_regret.assign(horizon, 0.0);
    s.mean_failed.assign(horizon, 0.0);
    s.mean_pulls.assign(arms, 0.0);

    for (const auto& r : results) {
        for (std::size_t t = 0; t < horizon; ++t) {
            s.mean_regret[t] += r.cumulative_regret[t];
            s.mean_failed[t] += static_cast<double>(r.failed_deliveries[t]);
        }
        for (Arm i = 0; i < arms; ++i)
            s.mean_pulls[i] += static_cast<double>(r.arm_pull_counts[i]);
    }
    for (std::size_t t = 0; t < horizon; ++t) {
        s.mean_regret[t] /= n;
        s.mean_failed[t] /= n;
    }
    for (double& p : s.mean_pulls)
        p /= n;

    if (results.size() > 1) {
        for (std::size_t t = 0; t < horizon; ++t) {
            double ss = 0.0;
            for (const auto& r : results) {
                const double d = r.cumulative_regret[t] - s.mean_regret[t];
                ss += d * d;
            }
            s.stderr_regret[t] = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
        }
    }

    if (horizon > 0) {
        double sum = 0.0;
        std::size_t used = 0;
        for (std::size_t r = 0; r < results.size(); ++r) {
            const auto& opt = oracle.size() == 1 ? oracle.front() : oracle[r];
            const double base = static_cast<double>(opt.failed_deliveries.back());
            if (base == 0.0) {
                ++s.degradation_excluded;
                continue;
            }
            sum += (static_cast<double>(results[r].failed_deliveries.back()) - base) / base;
            ++used;
        }
        if (used > 0)
            s.relative_degradation = sum / static_cast<double>(used);
    }

    s.checkpoints = log_checkpoints(horizon);
    for (std::size_t t : s.checkpoints)
        s.regret_over_log_t.push_back(s.mean_regret[t - 1] / std::log(static_cast<double>(t)));
    return s;
}

double regret_slope(const MetricsSummary& summary, std::size_t t1, std::size_t t2)
{
    if (t1 < 1 || t1 >= t2 || t2 > summary.horizon())
        throw std::invalid_argument("slope window needs 1 <= t1 < t2 <= horizon");
    return (summary.mean_regret[t2 - 1] - summary.mean_regret[t1 - 1]) /
           (std::log(static_cast<double>(t2)) - std::log(static_cast<double>(t1)));
}

// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p)
{
    std::filesystem::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

BernoulliInstance instance_from(const json& j, const std::filesystem::path& base)
{
    if (j.is_string())
        return load_instance(resolve(base, j.get<std::string>()));
    return parse_instance(j.dump());
}

PolicySpec policy_from(const json& j)
{
    PolicySpec spec;
    if (j.is_string()) {
        spec.name = j.get<std::string>();
        spec.model = default_feedback_model(spec.name);
    } else {
        spec.name = j.at("name").get<std::string>();
        spec.model = j.contains("feedback") ? parse_feedback_model(j.at("feedback").get<std::string>())
                                            : default_feedback_model(spec.name);
    }
    check_compatible(spec);
    return spec;
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir)
{
    const json doc = json::parse(json_text);
    ExperimentConfig cfg;

    const json& env = doc.at("environment");
    const std::string type = env.value("type", "synthetic");
    if (type == "synthetic") {
        cfg.synthetic = SyntheticSpec{instance_from(env.at("instance"), base_dir), env.value("correlated", false)};
    } else if (type == "trace") {
        TraceSpec t;
        t.poses = traces::load_pose_csv(resolve(base_dir, env.at("poses").get<std::string>()));
        t.bandwidth = traces::load_bandwidth_csv(resolve(base_dir, env.at("bandwidth").get<std::string>()));
        if (env.contains("portions")) {
            for (const auto& p : env.at("portions"))
                t.portions.push_back({p.at("yaw_extent").get<double>(), p.at("pitch_extent").get<double>(),
                                      p.at("size_megabits").get<double>()});
        } else {
            t.portions = traces::default_portions(env.value("base_frame_megabits", 0.88));
        }
        traces::validate_portions(t.portions);
        t.interval_s = env.value("interval_s", traces::kDefaultIntervalSeconds);
        cfg.trace = std::move(t);
    } else {
        throw std::invalid_argument("environment type must be \"synthetic\" or \"trace\"");
    }

    if (doc.contains("policies")) {
        for (const auto& p : doc.at("policies"))
            cfg.policies.push_back(policy_from(p));
    } else {
        for (const char* name : {"adaport", "ts2bb", "ts1b", "exp3", "heuristic"})
            cfg.policies.push_back({name, default_feedback_model(name)});
    }

    cfg.horizon = doc.value("horizon", cfg.horizon);
    cfg.replications = doc.value("replications", cfg.replications);
    cfg.base_seed = doc.value("base_seed", cfg.base_seed);
    if (doc.contains("output"))
        cfg.output = resolve(base_dir, doc.at("output").get<std::string>());
    if (doc.contains("slope_window")) {
        const auto w = doc.at("slope_window").get<std::vector<std::size_t>>();
        if (w.size() != 2)
            throw std::invalid_argument("slope_window must be [t1, t2]");
        cfg.slope_window = std::make_pair(w[0], w[1]);
    }
    cfg.threads = doc.value("threads", 0u);
    if (doc.contains("exp3_gamma"))
        cfg.exp3_gamma = doc.at("exp3_gamma").get<double>();
    cfg.svg = doc.value("svg", true);

    if (cfg.horizon == 0 || cfg.replications == 0)
        throw std::invalid_argument("horizon and replications must be positive");
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.parent_path());
}

EnvFactory make_env_factory(const ExperimentConfig& config)
{
    if (config.synthetic) {
        const SyntheticSpec spec = *config.synthetic;
        spec.instance.optimal_arm();  // surfaces ties before any run
        return [spec](std::uint64_t seed) -> std::unique_ptr<Environment> {
            if (spec.correlated)
                return std::make_unique<CorrelatedSyntheticEnv>(spec.instance, seed);
            return std::make_unique<SyntheticEnv>(spec.instance, seed);
        };
    }
    if (config.trace) {
        const auto& t = *config.trace;
        auto matrices = std::make_shared<const traces::FeedbackMatrices>(
            traces::build_matrices(t.poses, t.bandwidth, t.portions, config.horizon, t.interval_s));
        return [matrices](std::uint64_t) -> std::unique_ptr<Environment> {
            return std::make_unique<ReplayEnv>(matrices);
        };
    }
    throw std::invalid_argument("config has no environment");
}

ExperimentReport run_experiment(const ExperimentConfig& config)
{
    const EnvFactory factory = make_env_factory(config);
    RunOptions opts;
    opts.horizon = config.horizon;
    opts.replications = config.replications;
    opts.base_seed = config.base_seed;
    opts.threads = config.threads;
    opts.exp3_gamma = config.exp3_gamma;

    ExperimentReport report;
    const auto oracle_runs = run_replications(factory, {"oracle", FeedbackModel::TwoFB}, opts);
    report.oracle = aggregate(oracle_runs, oracle_runs);
    report.oracle.policy = "oracle";

    // Windows reaching past the horizon fall back to the default.
    const auto fallback = std::make_pair(std::max<std::size_t>(1, config.horizon / 20), config.horizon);
    report.slope_window = config.slope_window.value_or(fallback);
    if (report.slope_window.second > config.horizon)
        report.slope_window = fallback;
    for (const auto& spec : config.policies) {
        const auto runs = run_replications(factory, spec, opts);
        auto summary = aggregate(runs, oracle_runs);
        summary.policy = spec.name;
        summary.model = spec.model;
        const auto [t1, t2] = report.slope_window;
        report.slopes.push_back(t1 < t2 && t2 <= config.horizon ? regret_slope(summary, t1, t2) : std::nan(""));
        report.policies.push_back(std::move(summary));
    }
    return report;
}

void write_curve_csv(std::ostream& out, const MetricsSummary& s)
{
    out << "t,mean_regret,stderr,mean_failed\n" << std::setprecision(10);
    for (std::size_t t = 0; t < s.horizon(); ++t)
        out << t + 1 << ',' << s.mean_regret[t] << ',' << s.stderr_regret[t] << ',' << s.mean_failed[t] << '\n';
}

void write_summary_csv(std::ostream& out, const ExperimentReport& report)
{
    out << "policy,feedback,horizon,replications,final_mean_regret,final_stderr,mean_failed,oracle_mean_failed,"
           "relative_degradation,degradation_excluded,slope_t1,slope_t2,regret_slope,mean_pulls\n";
    out << std::setprecision(10);
    const double oracle_failed = report.oracle.horizon() ? report.oracle.mean_failed.back() : 0.0;
    for (std::size_t k = 0; k < report.policies.size(); ++k) {
        const auto& s = report.policies[k];
        out << s.policy << ',' << to_string(s.model) << ',' << s.horizon() << ',' << s.replications << ','
            << s.mean_regret.back() << ',' << s.stderr_regret.back() << ',' << s.mean_failed.back() << ','
            << oracle_failed << ',';
        if (s.relative_degradation)
            out << *s.relative_degradation;
        else
            out << "undefined";
        out << ',' << s.degradation_excluded << ',' << report.slope_window.first << ',' << report.slope_window.second
            << ',' << report.slopes[k] << ',';
        for (std::size_t i = 0; i < s.mean_pulls.size(); ++i)
            out << (i ? ";" : "") << s.mean_pulls[i];
        out << '\n';
    }
}

void write_regret_svg(std::ostream& out, std::span<const MetricsSummary> curves)
{
    constexpr double width = 720, height = 440, left = 70, right = 150, top = 20, bottom = 50;
    constexpr const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

    std::size_t horizon = 0;
    double ymax = 0.0;
    for (const auto& c : curves) {
        horizon = std::max(horizon, c.horizon());
        for (double v : c.mean_regret)
            ymax = std::max(ymax, v);
    }
    if (ymax <= 0.0)
        ymax = 1.0;
    const double pw = width - left - right, ph = height - top - bottom;

    out << std::fixed << std::setprecision(2);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">timeslot (T = "
        << horizon << ")</text>\n";
    out << "<text x=\"16\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 16 " << top + ph / 2
        << ")\" text-anchor=\"middle\">mean cumulative regret (max " << ymax << ")</text>\n";

    for (std::size_t k = 0; k < curves.size(); ++k) {
        const auto& c = curves[k];
        const char* color = colors[k % std::size(colors)];
        const std::size_t stride = std::max<std::size_t>(1, c.horizon() / 500);
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t t = 0; t < c.horizon(); t += stride) {
            const double x = left + pw * static_cast<double>(t + 1) / static_cast<double>(horizon);
            const double y = top + ph * (1.0 - c.mean_regret[t] / ymax);
            out << x << ',' << y << ' ';
        }
        out << "\"/>\n";
        out << "<text x=\"" << left + pw + 10 << "\" y=\"" << top + 20 + 18.0 * static_cast<double>(k) << "\" fill=\""
            << color << "\">" << c.policy << " (" << to_string(c.model) << ")</text>\n";
    }
    out << "</svg>\n";
}

void write_report(const ExperimentReport& report, const ExperimentConfig& config)
{
    std::filesystem::create_directories(config.output);
    auto open = [&](const std::string& name) {
        std::ofstream f(config.output / name);
        if (!f)
            throw std::runtime_error("cannot write " + (config.output / name).string());
        return f;
    };
    for (const auto& s : report.policies) {
        auto f = open(s.policy + ".csv");
        write_curve_csv(f, s);
    }
    {
        auto f = open("oracle.csv");
        write_curve_csv(f, report.oracle);
    }
    {
        auto f = open("summary.csv");
        write_summary_csv(f, report);
    }
    if (config.svg) {
        auto f = open("regret.svg");
        write_regret_svg(f, report.policies);
    }
}

}  // namespace adaport::harness
