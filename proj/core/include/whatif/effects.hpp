#pragma once

// Was an object affected by the action? Normalize every pose component with
// dataset statistics, take the spread of the translation and rotation parts
// over time, and compare both against grid-searched thresholds.

#include "whatif/types.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <vector>

namespace whatif::effects {

inline constexpr int kPoseComponents = 12;  // 3 translation + 9 rotation entries (row-major)

/// Pose flattened as (tx, ty, tz, r00, r01, ..., r22).
std::array<double, kPoseComponents> flatten(const Pose& p);

struct PoseStats {
  std::array<double, kPoseComponents> mean{};
  std::array<double, kPoseComponents> std{};

  /// Identity normalization: mean 0, std 1.
  static PoseStats identity();
  bool operator==(const PoseStats&) const = default;
};

struct MotionSummary {
  double sigma_t = 0.0;
  double sigma_r = 0.0;
  bool operator==(const MotionSummary&) const = default;
};

struct Thresholds {
  double tau_t = 0.0;
  double tau_r = 0.0;
  bool operator==(const Thresholds&) const = default;
};

/// Mean and population std per component over every sample of every
/// trajectory. Zero-variance components get std = 1. Removed trajectories are
/// skipped. Throws DataError("no training data").
PoseStats fit_pose_stats(const std::vector<const Trajectory*>& trajectories);

/// Streaming form of fit_pose_stats: per-component count, mean and sum of
/// squared deviations, mergeable across partial corpora.
struct PoseStatsAccumulator {
  std::size_t n = 0;
  std::array<double, kPoseComponents> mean{};
  std::array<double, kPoseComponents> m2{};

  void add(const Trajectory& trajectory);
  void merge(const PoseStatsAccumulator& other);
  PoseStats finish() const;
};

/// sigma_t: square root of the mean, over the 3 translation components, of the
/// temporal variance of the normalized component; sigma_r likewise over the 9
/// rotation entries. A constant trajectory gives exactly (0, 0).
MotionSummary summarize(const Trajectory& trajectory, const PoseStats& stats);

/// sigma_t > tau_t or sigma_r > tau_r.
bool is_affected(const MotionSummary& s, const Thresholds& t);

struct LabeledSummary {
  MotionSummary summary;
  bool label;
};

/// Candidate thresholds per axis: midpoints between consecutive sorted
/// distinct observed values, half the minimum when it is positive, and one
/// value above the maximum. Every candidate is positive.
std::vector<double> candidates(std::vector<double> values);

struct GridResult {
  Thresholds thresholds;
  std::size_t correct = 0;
  std::size_t total = 0;
  double accuracy() const { return total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0; }
};

/// Exhaustive search over candidates(sigma_t) x candidates(sigma_r) for the
/// most accurate pair, ties to the lexicographically smallest (tau_t, tau_r).
/// Throws DataError("degenerate labels") unless both labels occur.
GridResult grid_search(const std::vector<LabeledSummary>& examples);

/// Simulator ground truth: max displacement from the first sample above
/// 5e-3 m, or rotation from the first sample above 2 degrees.
inline constexpr double kMoveDistance = 5e-3;
inline constexpr double kMoveAngleDeg = 2.0;
double rotation_angle(const Mat3& from, const Mat3& to);
bool moved(const Pose& reference, const Pose& pose);
bool ground_truth_affected(const Trajectory& trajectory);

nlohmann::json to_json(const PoseStats& stats, const Thresholds& thresholds);
std::pair<PoseStats, Thresholds> effects_model_from_json(const nlohmann::json& j, const std::string& path = "");

}  // namespace whatif::effects
