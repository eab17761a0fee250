#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "adaport/core.hpp"

namespace adaport::traces {

// Viewport the user actually sees, centered at the actual head pose.
inline constexpr double kViewportYaw = 100.0;
inline constexpr double kViewportPitch = 90.0;

// Default frame interval: 100 frames per second.
inline constexpr double kDefaultIntervalSeconds = 0.01;

struct Pose {
    double yaw = 0.0;    // degrees, [-180, 180)
    double pitch = 0.0;  // degrees, [-90, 90]
};

struct HeadPoseSample {
    std::size_t t = 0;
    double yaw = 0.0;
    double pitch = 0.0;

    Pose pose() const { return {yaw, pitch}; }
};

struct BandwidthSample {
    std::size_t t = 0;
    double throughput_mbps = 0.0;
};

// A candidate delivery region centered on the predicted viewport.
struct PortionSpec {
    double yaw_extent = kViewportYaw;
    double pitch_extent = kViewportPitch;
    double size_megabits = 1.0;  // payload per frame
};

// The four portions used in the trace experiments, smallest first, with
// payloads scaled by angular area relative to the minimum viewport.
std::vector<PortionSpec> default_portions(double base_frame_megabits);

// Throws std::invalid_argument unless every portion contains the viewport,
// has a positive payload and the list is nested (both extents nondecreasing).
void validate_portions(std::span<const PortionSpec> portions);

// Precomputed T x N outcome matrices, row-major.
class FeedbackMatrices {
public:
    FeedbackMatrices() = default;
    FeedbackMatrices(std::size_t t_count, std::size_t n_arms);

    std::size_t t_count() const { return t_count_; }
    std::size_t n_arms() const { return n_arms_; }

    Bit& x(std::size_t t, Arm i) { return x_[t * n_arms_ + i]; }
    Bit& y(std::size_t t, Arm i) { return y_[t * n_arms_ + i]; }
    Bit x(std::size_t t, Arm i) const { return x_[t * n_arms_ + i]; }
    Bit y(std::size_t t, Arm i) const { return y_[t * n_arms_ + i]; }

    std::span<const Bit> x_row(std::size_t t) const { return {x_.data() + t * n_arms_, n_arms_}; }
    std::span<const Bit> y_row(std::size_t t) const { return {y_.data() + t * n_arms_, n_arms_}; }

    // Number of rounds in which x = y = 1 for arm i.
    std::uint64_t reward_total(Arm i) const;

    friend bool operator==(const FeedbackMatrices&, const FeedbackMatrices&) = default;

private:
    std::size_t t_count_ = 0;
    std::size_t n_arms_ = 0;
    std::vector<Bit> x_;
    std::vector<Bit> y_;
};

// Wraps an angle into [-180, 180).
double wrap_degrees(double deg);

// Signed minimal angular difference a - b, in [-180, 180).
double angular_difference(double a, double b);

// Least-squares line through the three most recent samples, per axis,
// evaluated one timeslot past the last sample. Yaw is unwrapped before the
// fit. Returns nullopt when fewer than three samples are supplied; callers
// then fall back to the last observed pose.
std::optional<Pose> predict_pose(std::span<const HeadPoseSample> history);

// 1 iff a portion centered at `predicted` contains the viewport centered at
// `actual`.
Bit coverage(const Pose& actual, const Pose& predicted, const PortionSpec& portion);

// 1 iff the portion's payload crosses the link within the frame interval.
Bit delivery(const PortionSpec& portion, double throughput_mbps, double interval_s);

// Replays the traces (each cycled independently) until `target_t` rows,
// predicting the pose for each slot from the previous three.
FeedbackMatrices build_matrices(std::span<const HeadPoseSample> poses,
                                std::span<const BandwidthSample> bandwidth,
                                std::span<const PortionSpec> portions,
                                std::size_t target_t,
                                double interval_s = kDefaultIntervalSeconds);

// CSV I/O. Pose files: t,yaw_deg,pitch_deg. Bandwidth files: t,throughput_mbps.
// Matrices: t,x_1..x_N,y_1..y_N with 1-based t.
std::vector<HeadPoseSample> read_pose_csv(std::istream& in);
std::vector<BandwidthSample> read_bandwidth_csv(std::istream& in);
std::vector<HeadPoseSample> load_pose_csv(const std::filesystem::path& path);
std::vector<BandwidthSample> load_bandwidth_csv(const std::filesystem::path& path);
void write_pose_csv(std::ostream& out, std::span<const HeadPoseSample> poses);
void write_bandwidth_csv(std::ostream& out, std::span<const BandwidthSample> bandwidth);
void write_matrices_csv(std::ostream& out, const FeedbackMatrices& m);
FeedbackMatrices read_matrices_csv(std::istream& in);

// Synthetic trace generators for tests and the bundled demo data.
//
// Head motion alternates fixations (pose held exactly, with rare sub-degree
// jitter) and smooth pursuits with a randomly drifting angular velocity.
std::vector<HeadPoseSample> synthesize_head_motion(std::size_t length, std::uint64_t seed);

// Throughput fluctuating just below a fixed UDP sending rate, with
// occasional deep fades.
std::vector<BandwidthSample> synthesize_bandwidth(std::size_t length, double sending_rate_mbps,
                                                  std::uint64_t seed);

}  // namespace adaport::traces
