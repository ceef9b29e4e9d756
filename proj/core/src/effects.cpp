#include "whatif/effects.hpp"

#include "whatif/error.hpp"
#include "whatif/serialization.hpp"

#include <algorithm>
#include <cmath>

namespace whatif::effects {
namespace {

// Shifted accumulation: subtracting a reference value keeps constant
// components exactly at zero variance.
struct Moments {
  double ref = 0.0;
  double sum = 0.0;
  double sq = 0.0;
  std::size_t n = 0;

  void add(double v) {
    if (n == 0) ref = v;
    const double d = v - ref;
    sum += d;
    sq += d * d;
    ++n;
  }
  double mean() const { return ref + sum / static_cast<double>(n); }
  double variance() const {
    const double m = sum / static_cast<double>(n);
    return std::max(0.0, sq / static_cast<double>(n) - m * m);
  }
};

}  // namespace

std::array<double, kPoseComponents> flatten(const Pose& p) {
  std::array<double, kPoseComponents> out{};
  for (int i = 0; i < 3; ++i) out[i] = p.translation[i];
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) out[3 + r * 3 + c] = p.rotation(r, c);
  return out;
}

PoseStats PoseStats::identity() {
  PoseStats s;
  s.mean.fill(0.0);
  s.std.fill(1.0);
  return s;
}

PoseStats fit_pose_stats(const std::vector<const Trajectory*>& trajectories) {
  PoseStatsAccumulator acc;
  for (const Trajectory* t : trajectories)
    if (t) acc.add(*t);
  return acc.finish();
}

void PoseStatsAccumulator::add(const Trajectory& trajectory) {
  if (trajectory.removed) return;
  for (const auto& s : trajectory.samples) {
    const auto v = flatten(s.pose);
    ++n;
    for (int k = 0; k < kPoseComponents; ++k) {
      const double d = v[k] - mean[k];
      mean[k] += d / static_cast<double>(n);
      m2[k] += d * (v[k] - mean[k]);
    }
  }
}

void PoseStatsAccumulator::merge(const PoseStatsAccumulator& o) {
  if (o.n == 0) return;
  if (n == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(n), nb = static_cast<double>(o.n), total = na + nb;
  for (int k = 0; k < kPoseComponents; ++k) {
    const double d = o.mean[k] - mean[k];
    mean[k] += d * nb / total;
    m2[k] += o.m2[k] + d * d * na * nb / total;
  }
  n += o.n;
}

PoseStats PoseStatsAccumulator::finish() const {
  if (n == 0) throw DataError("no training data");
  PoseStats stats;
  for (int k = 0; k < kPoseComponents; ++k) {
    stats.mean[k] = mean[k];
    const double var = std::max(0.0, m2[k] / static_cast<double>(n));
    stats.std[k] = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  return stats;
}

MotionSummary summarize(const Trajectory& trajectory, const PoseStats& stats) {
  if (trajectory.removed) throw DataError("no trajectory for removed object");
  if (trajectory.samples.size() < 2) throw DataError("trajectory needs at least two samples");
  std::array<Moments, kPoseComponents> m;
  for (const auto& s : trajectory.samples) {
    const auto v = flatten(s.pose);
    for (int k = 0; k < kPoseComponents; ++k) m[k].add((v[k] - stats.mean[k]) / stats.std[k]);
  }
  double vt = 0.0, vr = 0.0;
  for (int k = 0; k < 3; ++k) vt += m[k].variance();
  for (int k = 3; k < kPoseComponents; ++k) vr += m[k].variance();
  return {std::sqrt(vt / 3.0), std::sqrt(vr / 9.0)};
}

bool is_affected(const MotionSummary& s, const Thresholds& t) { return s.sigma_t > t.tau_t || s.sigma_r > t.tau_r; }

std::vector<double> candidates(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<double> out;
  if (values.empty()) return {1.0};
  if (values.front() > 0.0) out.push_back(0.5 * values.front());
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const double mid = 0.5 * (values[i] + values[i + 1]);
    if (mid > 0.0) out.push_back(mid);
  }
  out.push_back(values.back() > 0.0 ? 2.0 * values.back() : 1.0);
  return out;
}

GridResult grid_search(const std::vector<LabeledSummary>& examples) {
  std::size_t positives = 0;
  for (const auto& e : examples) positives += e.label ? 1 : 0;
  if (positives == 0 || positives == examples.size()) throw DataError("degenerate labels");

  std::vector<double> ts, rs;
  for (const auto& e : examples) {
    ts.push_back(e.summary.sigma_t);
    rs.push_back(e.summary.sigma_r);
  }
  const std::vector<double> ct = candidates(ts), cr = candidates(rs);
  const std::size_t gr = cr.size();

  // Sweep tau_t from the largest candidate down. Examples with sigma_t above
  // the current tau_t are predicted positive whatever tau_r is; for the rest,
  // correct[j] counts correct predictions at tau_r = cr[j].
  std::vector<std::size_t> order(examples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return examples[a].summary.sigma_t > examples[b].summary.sigma_t; });

  auto r_index = [&](double r) {
    // First candidate >= r: example is positive for candidates below that.
    return static_cast<std::size_t>(std::lower_bound(cr.begin(), cr.end(), r) - cr.begin());
  };
  std::vector<long> correct(gr, 0);
  auto add_example = [&](const LabeledSummary& e, long sign) {
    const std::size_t cut = r_index(e.summary.sigma_r);  // positive for j < cut
    for (std::size_t j = 0; j < gr; ++j) {
      const bool pred = j < cut;
      if (pred == e.label) correct[j] += sign;
    }
  };
  for (const auto& e : examples) add_example(e, 1);

  GridResult best;
  best.total = examples.size();
  bool have = false;
  std::size_t moved_positive = 0;
  std::size_t next = 0;
  for (std::size_t ci = ct.size(); ci-- > 0;) {
    const double tau_t = ct[ci];
    while (next < order.size() && examples[order[next]].summary.sigma_t > tau_t) {
      const auto& e = examples[order[next]];
      add_example(e, -1);
      moved_positive += e.label ? 1 : 0;
      ++next;
    }
    for (std::size_t j = 0; j < gr; ++j) {
      const std::size_t total = moved_positive + static_cast<std::size_t>(correct[j]);
      // Descending tau_t: ties prefer the later (smaller) tau_t; within one
      // tau_t the first (smallest) tau_r wins.
      const bool better = !have || total > best.correct ||
                          (total == best.correct && (tau_t < best.thresholds.tau_t ||
                                                     (tau_t == best.thresholds.tau_t && cr[j] < best.thresholds.tau_r)));
      if (better) {
        best.correct = total;
        best.thresholds = {tau_t, cr[j]};
        have = true;
      }
    }
  }
  return best;
}

double rotation_angle(const Mat3& from, const Mat3& to) {
  const Mat3 d = to * from.transpose();
  const double c = std::clamp(0.5 * (d.trace() - 1.0), -1.0, 1.0);
  return std::acos(c);
}

bool moved(const Pose& reference, const Pose& pose) {
  return (pose.translation - reference.translation).norm() > kMoveDistance ||
         rotation_angle(reference.rotation, pose.rotation) > kMoveAngleDeg * M_PI / 180.0;
}

bool ground_truth_affected(const Trajectory& trajectory) {
  if (trajectory.removed || trajectory.samples.empty()) return false;
  const Pose& ref = trajectory.samples.front().pose;
  for (const auto& s : trajectory.samples)
    if (moved(ref, s.pose)) return true;
  return false;
}

nlohmann::json to_json(const PoseStats& stats, const Thresholds& thresholds) {
  return {{"format", "whatif-effects/1"},
          {"mean", stats.mean},
          {"std", stats.std},
          {"tau_t", thresholds.tau_t},
          {"tau_r", thresholds.tau_r}};
}

std::pair<PoseStats, Thresholds> effects_model_from_json(const nlohmann::json& j, const std::string& path) {
  PoseStats s;
  const auto& mean = io::array(io::field(j, "mean", path), path + ".mean", kPoseComponents);
  const auto& sd = io::array(io::field(j, "std", path), path + ".std", kPoseComponents);
  for (int k = 0; k < kPoseComponents; ++k) {
    s.mean[k] = io::number(mean[k], path + ".mean[" + std::to_string(k) + "]");
    s.std[k] = io::number(sd[k], path + ".std[" + std::to_string(k) + "]");
    if (!(s.std[k] > 0.0)) throw SchemaError(path + ".std[" + std::to_string(k) + "]", "std must be positive");
  }
  Thresholds t{io::number(io::field(j, "tau_t", path), path + ".tau_t"),
               io::number(io::field(j, "tau_r", path), path + ".tau_r")};
  if (!(t.tau_t > 0.0) || !(t.tau_r > 0.0)) throw SchemaError(path, "thresholds must be positive");
  return {s, t};
}

}  // namespace whatif::effects
