#include "whatif/describer.hpp"

#include "whatif/error.hpp"
#include "whatif/lexicon.hpp"

#include <algorithm>

namespace whatif::describer {

DiffSeries diff_trajectories(const Trajectory& subject, const Trajectory& other) {
  if (subject.removed || other.removed) throw DataError("removed object has no trajectory");
  DiffSeries d{subject.cls, other.cls, {}};
  const std::size_t n = std::min(subject.samples.size(), other.samples.size());
  d.deltas.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = effects::flatten(subject.samples[i].pose);
    const auto b = effects::flatten(other.samples[i].pose);
    std::array<double, effects::kPoseComponents> delta{};
    for (int k = 0; k < effects::kPoseComponents; ++k) delta[k] = a[k] - b[k];
    d.deltas.push_back(delta);
  }
  return d;
}

std::string_view event_kind_id(EventKind k) {
  switch (k) {
    case EventKind::Nothing: return "nothing";
    case EventKind::PushedBy: return "pushed_by";
    case EventKind::HitByDropped: return "hit_by_dropped";
    case EventKind::FallsOffTable: return "falls_off_table";
    case EventKind::Moved: return "moved";
  }
  return "nothing";
}

std::string_view magnitude_id(Magnitude m) { return m == Magnitude::Slight ? "slight" : "normal"; }

AffectedFn by_thresholds(const effects::PoseStats& stats, const effects::Thresholds& thresholds) {
  return [stats, thresholds](ObjectClass, const Trajectory& t) {
    return effects::is_affected(effects::summarize(t, stats), thresholds);
  };
}

AffectedFn by_labels(std::map<ObjectClass, bool> labels) {
  return [labels = std::move(labels)](ObjectClass c, const Trajectory& t) {
    auto it = labels.find(c);
    return it != labels.end() ? it->second : effects::ground_truth_affected(t);
  };
}

AffectedFn by_ground_truth() {
  return [](ObjectClass, const Trajectory& t) { return effects::ground_truth_affected(t); };
}

std::size_t motion_onset(const Trajectory& trajectory) {
  if (trajectory.samples.empty()) return 0;
  const Pose& ref = trajectory.samples.front().pose;
  for (std::size_t i = 0; i < trajectory.samples.size(); ++i)
    if (effects::moved(ref, trajectory.samples[i].pose)) return i;
  return trajectory.samples.size();
}

Event extract_event(ObjectClass subject, const physics::SimulationResult& result, const Action& action,
                    const AffectedFn& affected, const Table& table) {
  if (subject == action.target) throw DataError("subject is the acted object");
  const Trajectory* traj = result.find(subject);
  if (!traj || traj->removed) throw DataError("subject not present in the simulation: " + std::string(class_id(subject)));

  Event e{EventKind::Nothing, subject, std::nullopt, Magnitude::Normal};
  if (!affected(subject, *traj)) return e;

  const Pose& first = traj->samples.front().pose;
  double max_disp = 0.0;
  for (const auto& s : traj->samples) max_disp = std::max(max_disp, (s.pose.translation - first.translation).norm());
  e.magnitude = max_disp < kSlightDisplacement ? Magnitude::Slight : Magnitude::Normal;

  const Vec3& last = traj->samples.back().pose.translation;
  const bool off = std::abs(last.x()) > table.half_extents.x() || std::abs(last.y()) > table.half_extents.y();
  if (off && last.z() < table.top()) {
    e.kind = EventKind::FallsOffTable;
    return e;
  }

  const std::size_t onset = motion_onset(*traj);
  const double onset_t = onset < traj->samples.size() ? traj->samples[onset].t : traj->samples.back().t;
  for (const auto& c : result.contacts) {
    if (c.t > onset_t) break;
    if (!c.b) continue;
    if (c.a == subject) e.agent = *c.b;
    else if (*c.b == subject) e.agent = c.a;
    if (e.agent) break;
  }
  if (!e.agent) {
    e.kind = EventKind::Moved;
    return e;
  }
  e.kind = action.kind == ActionKind::Drop && *e.agent == action.target ? EventKind::HitByDropped : EventKind::PushedBy;
  return e;
}

Event extract_event(ObjectClass subject, const physics::SimulationResult& result, const Action& action,
                    const effects::PoseStats& stats, const effects::Thresholds& thresholds, const Table& table) {
  return extract_event(subject, result, action, by_thresholds(stats, thresholds), table);
}

std::string realize(const Event& e) {
  const std::string subject(lexicon::display_name(e.subject));
  const std::string agent = e.agent ? std::string(lexicon::display_name(*e.agent)) : std::string();
  switch (e.kind) {
    case EventKind::Nothing: return "nothing";
    case EventKind::PushedBy:
      return e.magnitude == Magnitude::Slight ? "the " + subject + " is pushed a little by the " + agent
                                              : "the " + subject + " is pushed by the " + agent;
    case EventKind::HitByDropped: return "the " + subject + " is pushed by the " + agent;
    case EventKind::FallsOffTable: return "the " + subject + " falls off the table";
    case EventKind::Moved: return "the " + subject + " shakes a little from the impact";
  }
  return "nothing";
}

std::map<ObjectClass, Description> describe_all(const physics::SimulationResult& result, const Action& action,
                                                const AffectedFn& affected, const Table& table) {
  std::map<ObjectClass, Description> out;
  for (const auto& t : result.trajectories) {
    if (t.removed || t.cls == action.target) continue;
    const Event e = extract_event(t.cls, result, action, affected, table);
    out.emplace(t.cls, Description{e, realize(e)});
  }
  return out;
}

std::map<ObjectClass, Description> describe_all(const physics::SimulationResult& result, const Action& action,
                                                const effects::PoseStats& stats, const effects::Thresholds& thresholds,
                                                const Table& table) {
  return describe_all(result, action, by_thresholds(stats, thresholds), table);
}

}  // namespace whatif::describer
