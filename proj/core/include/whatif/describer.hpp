#pragma once

// One sentence per non-acted object from a simulation result.

#include "whatif/effects.hpp"
#include "whatif/physics.hpp"
#include "whatif/types.hpp"

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace whatif::describer {

struct DiffSeries {
  ObjectClass subject;
  ObjectClass other;
  std::vector<std::array<double, effects::kPoseComponents>> deltas;
};

/// Per-timestep subject minus other, over the shorter of the two.
DiffSeries diff_trajectories(const Trajectory& subject, const Trajectory& other);

enum class EventKind { Nothing, PushedBy, HitByDropped, FallsOffTable, Moved };
enum class Magnitude { Slight, Normal };

std::string_view event_kind_id(EventKind k);
std::string_view magnitude_id(Magnitude m);

struct Event {
  EventKind kind = EventKind::Nothing;
  ObjectClass subject;
  std::optional<ObjectClass> agent;
  Magnitude magnitude = Magnitude::Normal;
  bool operator==(const Event&) const = default;
};

inline constexpr double kSlightDisplacement = 0.03;

/// Decides whether a subject was affected, given its trajectory.
using AffectedFn = std::function<bool(ObjectClass subject, const Trajectory& trajectory)>;

AffectedFn by_thresholds(const effects::PoseStats& stats, const effects::Thresholds& thresholds);
AffectedFn by_labels(std::map<ObjectClass, bool> labels);
AffectedFn by_ground_truth();

/// First sample index whose pose moved (effects::moved) relative to the first
/// sample; samples.size() when it never does.
std::size_t motion_onset(const Trajectory& trajectory);

Event extract_event(ObjectClass subject, const physics::SimulationResult& result, const Action& action,
                    const AffectedFn& affected, const Table& table = {});
Event extract_event(ObjectClass subject, const physics::SimulationResult& result, const Action& action,
                    const effects::PoseStats& stats, const effects::Thresholds& thresholds, const Table& table = {});

std::string realize(const Event& event);

struct Description {
  Event event;
  std::string text;
  bool operator==(const Description&) const = default;
};

/// One entry per present, non-target object.
std::map<ObjectClass, Description> describe_all(const physics::SimulationResult& result, const Action& action,
                                                const AffectedFn& affected, const Table& table = {});
std::map<ObjectClass, Description> describe_all(const physics::SimulationResult& result, const Action& action,
                                                const effects::PoseStats& stats, const effects::Thresholds& thresholds,
                                                const Table& table = {});

}  // namespace whatif::describer
