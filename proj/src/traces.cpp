#include "adaport/traces.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace adaport::traces {
namespace {

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ','))
        fields.push_back(field);
    if (!line.empty() && line.back() == ',')
        fields.emplace_back();
    return fields;
}

std::string trim(std::string s)
{
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

// Reads a headed CSV, checks the header and hands each data row to `row`.
template <class RowFn>
void read_csv(std::istream& in, const std::vector<std::string>& expected_header, RowFn row)
{
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("empty CSV: header required");
    auto header = split_csv_line(line);
    for (auto& h : header)
        h = trim(h);
    if (header != expected_header) {
        std::string want;
        for (const auto& h : expected_header)
            want += (want.empty() ? "" : ",") + h;
        throw std::runtime_error("unexpected CSV header, want " + want);
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != expected_header.size())
            throw std::runtime_error("CSV line " + std::to_string(lineno) + ": wrong field count");
        try {
            row(fields);
        } catch (const std::logic_error&) {
            throw std::runtime_error("CSV line " + std::to_string(lineno) + ": malformed number");
        }
    }
}

std::ifstream open_or_throw(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    return in;
}

// Ordinary least squares through (t_k, v_k), evaluated at `at`. Values are
// taken relative to the last sample so a constant series extrapolates to
// exactly that constant.
double ols_extrapolate(std::span<const double> t, std::span<const double> v, double at)
{
    const std::size_t n = t.size();
    const double ref = v[n - 1];
    double t_mean = 0.0, v_mean = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        t_mean += t[k];
        v_mean += v[k] - ref;
    }
    t_mean /= static_cast<double>(n);
    v_mean /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        sxy += (t[k] - t_mean) * (v[k] - ref - v_mean);
        sxx += (t[k] - t_mean) * (t[k] - t_mean);
    }
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    return ref + (v_mean + slope * (at - t_mean));
}

}  // namespace

std::vector<PortionSpec> default_portions(double base_frame_megabits)
{
    if (!(base_frame_megabits > 0.0))
        throw std::invalid_argument("base frame size must be positive");
    constexpr double extents[4][2] = {{100, 90}, {102, 91}, {108, 94}, {120, 100}};
    std::vector<PortionSpec> out;
    for (const auto& e : extents) {
        const double area_ratio = (e[0] * e[1]) / (kViewportYaw * kViewportPitch);
        out.push_back({e[0], e[1], base_frame_megabits * area_ratio});
    }
    return out;
}

void validate_portions(std::span<const PortionSpec> portions)
{
    if (portions.empty())
        throw std::invalid_argument("portion list is empty");
    for (std::size_t i = 0; i < portions.size(); ++i) {
        const auto& p = portions[i];
        if (p.yaw_extent < kViewportYaw || p.pitch_extent < kViewportPitch)
            throw std::invalid_argument("portion " + std::to_string(i + 1) + " does not contain the viewport");
        if (!(p.size_megabits > 0.0))
            throw std::invalid_argument("portion " + std::to_string(i + 1) + " needs a positive payload");
        if (i > 0 && (p.yaw_extent < portions[i - 1].yaw_extent || p.pitch_extent < portions[i - 1].pitch_extent ||
                      p.size_megabits < portions[i - 1].size_megabits))
            throw std::invalid_argument("portions must be ordered by size");
    }
}

FeedbackMatrices::FeedbackMatrices(std::size_t t_count, std::size_t n_arms)
    : t_count_(t_count), n_arms_(n_arms), x_(t_count * n_arms, 0), y_(t_count * n_arms, 0)
{
}

std::uint64_t FeedbackMatrices::reward_total(Arm i) const
{
    std::uint64_t total = 0;
    for (std::size_t t = 0; t < t_count_; ++t)
        total += x(t, i) & y(t, i);
    return total;
}

double wrap_degrees(double deg)
{
    if (deg >= -180.0 && deg < 180.0)
        return deg;
    double r = std::fmod(deg + 180.0, 360.0);
    if (r < 0.0)
        r += 360.0;
    r -= 180.0;
    return r >= 180.0 ? r - 360.0 : r;
}

double angular_difference(double a, double b)
{
    return wrap_degrees(a - b);
}

std::optional<Pose> predict_pose(std::span<const HeadPoseSample> history)
{
    if (history.size() < 3)
        return std::nullopt;
    const auto last3 = history.last(3);

    double t[3], yaw[3], pitch[3];
    for (std::size_t k = 0; k < 3; ++k) {
        t[k] = static_cast<double>(last3[k].t);
        pitch[k] = last3[k].pitch;
    }
    yaw[0] = last3[0].yaw;
    for (std::size_t k = 1; k < 3; ++k)
        yaw[k] = yaw[k - 1] + angular_difference(last3[k].yaw, last3[k - 1].yaw);

    const double next = t[2] + 1.0;
    Pose out;
    out.yaw = wrap_degrees(ols_extrapolate(t, yaw, next));
    out.pitch = std::clamp(ols_extrapolate(t, pitch, next), -90.0, 90.0);
    return out;
}

Bit coverage(const Pose& actual, const Pose& predicted, const PortionSpec& portion)
{
    const double yaw_slack = (portion.yaw_extent - kViewportYaw) / 2.0;
    const double pitch_slack = (portion.pitch_extent - kViewportPitch) / 2.0;
    const double yaw_err = std::abs(angular_difference(actual.yaw, predicted.yaw));
    const double pitch_err = std::abs(actual.pitch - predicted.pitch);
    return static_cast<Bit>(yaw_err <= yaw_slack && pitch_err <= pitch_slack);
}

Bit delivery(const PortionSpec& portion, double throughput_mbps, double interval_s)
{
    if (!(throughput_mbps > 0.0))
        return 0;
    return static_cast<Bit>(portion.size_megabits / throughput_mbps <= interval_s);
}

FeedbackMatrices build_matrices(std::span<const HeadPoseSample> poses,
                                std::span<const BandwidthSample> bandwidth,
                                std::span<const PortionSpec> portions,
                                std::size_t target_t,
                                double interval_s)
{
    if (poses.empty() || bandwidth.empty())
        throw std::invalid_argument("pose and bandwidth traces must be nonempty");
    if (!(interval_s > 0.0))
        throw std::invalid_argument("frame interval must be positive");
    validate_portions(portions);

    const std::size_t n = portions.size();
    FeedbackMatrices m(target_t, n);
    // Sliding window over the concatenated pose stream, indexed by slot.
    std::vector<HeadPoseSample> window;
    window.reserve(3);

    for (std::size_t k = 0; k < target_t; ++k) {
        const Pose actual = poses[k % poses.size()].pose();

        Pose predicted;
        if (auto p = predict_pose(window))
            predicted = *p;
        else if (!window.empty())
            predicted = window.back().pose();
        else
            predicted = actual;  // session start: the initial pose is known

        const double throughput = bandwidth[k % bandwidth.size()].throughput_mbps;
        for (Arm i = 0; i < n; ++i) {
            m.x(k, i) = coverage(actual, predicted, portions[i]);
            m.y(k, i) = delivery(portions[i], throughput, interval_s);
        }

        if (window.size() == 3)
            window.erase(window.begin());
        window.push_back({k, actual.yaw, actual.pitch});
    }
    return m;
}

std::vector<HeadPoseSample> read_pose_csv(std::istream& in)
{
    std::vector<HeadPoseSample> out;
    read_csv(in, {"t", "yaw_deg", "pitch_deg"}, [&](const std::vector<std::string>& f) {
        HeadPoseSample s;
        s.t = std::stoull(f[0]);
        s.yaw = wrap_degrees(std::stod(f[1]));
        s.pitch = std::stod(f[2]);
        if (s.pitch < -90.0 || s.pitch > 90.0)
            throw std::runtime_error("pitch out of [-90, 90] at t=" + f[0]);
        if (!out.empty() && s.t <= out.back().t)
            throw std::runtime_error("pose timeslots must be strictly increasing");
        out.push_back(s);
    });
    return out;
}

std::vector<BandwidthSample> read_bandwidth_csv(std::istream& in)
{
    std::vector<BandwidthSample> out;
    read_csv(in, {"t", "throughput_mbps"}, [&](const std::vector<std::string>& f) {
        BandwidthSample s;
        s.t = std::stoull(f[0]);
        s.throughput_mbps = std::stod(f[1]);
        if (s.throughput_mbps < 0.0)
            throw std::runtime_error("negative throughput at t=" + f[0]);
        out.push_back(s);
    });
    return out;
}

std::vector<HeadPoseSample> load_pose_csv(const std::filesystem::path& path)
{
    auto in = open_or_throw(path);
    return read_pose_csv(in);
}

std::vector<BandwidthSample> load_bandwidth_csv(const std::filesystem::path& path)
{
    auto in = open_or_throw(path);
    return read_bandwidth_csv(in);
}

void write_pose_csv(std::ostream& out, std::span<const HeadPoseSample> poses)
{
    out << "t,yaw_deg,pitch_deg\n" << std::setprecision(10);
    for (const auto& s : poses)
        out << s.t << ',' << s.yaw << ',' << s.pitch << '\n';
}

void write_bandwidth_csv(std::ostream& out, std::span<const BandwidthSample> bandwidth)
{
    out << "t,throughput_mbps\n" << std::setprecision(10);
    for (const auto& s : bandwidth)
        out << s.t << ',' << s.throughput_mbps << '\n';
}

void write_matrices_csv(std::ostream& out, const FeedbackMatrices& m)
{
    out << 't';
    for (std::size_t i = 1; i <= m.n_arms(); ++i)
        out << ",x_" << i;
    for (std::size_t i = 1; i <= m.n_arms(); ++i)
        out << ",y_" << i;
    out << '\n';
    for (std::size_t t = 0; t < m.t_count(); ++t) {
        out << t + 1;
        for (Arm i = 0; i < m.n_arms(); ++i)
            out << ',' << int(m.x(t, i));
        for (Arm i = 0; i < m.n_arms(); ++i)
            out << ',' << int(m.y(t, i));
        out << '\n';
    }
}

FeedbackMatrices read_matrices_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("empty matrices CSV");
    const auto header = split_csv_line(line);
    if (header.empty() || trim(header[0]) != "t" || header.size() % 2 != 1)
        throw std::runtime_error("matrices CSV header must be t,x_1..x_N,y_1..y_N");
    const std::size_t n = (header.size() - 1) / 2;

    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line))
        if (!trim(line).empty())
            rows.push_back(split_csv_line(line));

    FeedbackMatrices m(rows.size(), n);
    for (std::size_t t = 0; t < rows.size(); ++t) {
        if (rows[t].size() != header.size())
            throw std::runtime_error("matrices CSV row " + std::to_string(t + 1) + ": wrong field count");
        for (Arm i = 0; i < n; ++i) {
            m.x(t, i) = static_cast<Bit>(std::stoi(rows[t][1 + i]) != 0);
            m.y(t, i) = static_cast<Bit>(std::stoi(rows[t][1 + n + i]) != 0);
        }
    }
    return m;
}

std::vector<HeadPoseSample> synthesize_head_motion(std::size_t length, std::uint64_t seed)
{
    Rng rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<HeadPoseSample> out;
    out.reserve(length);
    double yaw = 360.0 * unit(rng) - 180.0;
    double pitch = 20.0 * gauss(rng);
    double vyaw = 0.0, vpitch = 0.0;
    bool fixating = true;
    std::size_t remaining = 0;

    for (std::size_t t = 0; t < length; ++t) {
        if (remaining == 0) {
            fixating = !fixating;
            if (fixating) {
                remaining = 20 + static_cast<std::size_t>(60 * unit(rng));
            } else {
                remaining = 10 + static_cast<std::size_t>(40 * unit(rng));
                vyaw = 1.2 * gauss(rng);
                vpitch = 0.4 * gauss(rng);
            }
        }
        --remaining;

        if (fixating) {
            // Tracker jitter on a held pose.
            if (unit(rng) < 0.05) {
                yaw += 0.3 * gauss(rng);
                pitch += 0.15 * gauss(rng);
            }
        } else {
            vyaw += 0.7 * gauss(rng);
            vpitch += 0.25 * gauss(rng);
            yaw += vyaw;
            pitch += vpitch;
        }
        if (pitch > 80.0 || pitch < -80.0) {
            pitch = std::clamp(pitch, -80.0, 80.0);
            vpitch = -vpitch;
        }
        yaw = wrap_degrees(yaw);
        // Tracker resolution of 0.01 degree.
        const double q_yaw = wrap_degrees(std::round(yaw * 100.0) / 100.0);
        const double q_pitch = std::round(pitch * 100.0) / 100.0;
        out.push_back({t, q_yaw, q_pitch});
    }
    return out;
}

std::vector<BandwidthSample> synthesize_bandwidth(std::size_t length, double sending_rate_mbps, std::uint64_t seed)
{
    if (!(sending_rate_mbps > 0.0))
        throw std::invalid_argument("sending rate must be positive");
    Rng rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<BandwidthSample> out;
    out.reserve(length);
    // The link starts on a clear channel.
    constexpr std::size_t kClearWarmup = 300;
    std::size_t fade_left = 0;
    double fade_depth = 1.0;
    for (std::size_t t = 0; t < length; ++t) {
        if (t >= kClearWarmup && fade_left == 0 && unit(rng) < 0.004) {
            fade_left = 2 + static_cast<std::size_t>(6 * unit(rng));
            fade_depth = 0.2 + 0.4 * unit(rng);
        }
        double mbps = sending_rate_mbps * (1.0 - std::abs(0.03 * gauss(rng)));
        if (fade_left > 0) {
            mbps *= fade_depth;
            --fade_left;
        }
        out.push_back({t, std::max(0.0, std::round(mbps * 1000.0) / 1000.0)});
    }
    return out;
}

}  // namespace adaport::traces
