#pragma once

// Deterministic impulse-based rigid-body simulator for the tabletop scenes.
//
// Each step of length dt:
//   1. contact generation on the current poses (with a speculative margin that
//      covers the distance bodies can close within the step),
//   2. gravity and the implicit gyroscopic update on velocities,
//   3. sequential-impulse velocity solve (Coulomb friction, Baumgarte bias for
//      penetration beyond the slop) followed by a restitution pass,
//   4. semi-implicit Euler position update from the new velocities.
//
// Bodies that stay below the rest thresholds long enough are put to sleep and
// keep their pose exactly until an awake body touches them.

#include "whatif/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace whatif::physics {

struct Params {
  Vec3 gravity{0.0, 0.0, -kGravity};
  double dt = kTimeStep;
  double restitution = 0.1;
  double restitution_threshold = 0.2;  // m/s of approach below which contacts are inelastic
  double friction_table = 0.5;
  double friction_object = 0.4;
  double baumgarte = 0.2;
  double penetration_slop = 5e-4;
  double speculative_margin = 4e-3;
  int iterations = 20;

  double push_impulse = 0.6;     // N·s
  double rotate_impulse = 0.02;  // N·m·s
  double drop_height = 0.25;     // m between the onto object's top and the dropped object's bottom

  bool sleeping = true;
  double sleep_linear = 0.01;
  double sleep_angular = 0.1;
  int sleep_steps = 60;
  // Velocity change allowed over the still window; larger changes mean the
  // body is accelerating (e.g. starting to tip) and must stay awake.
  double sleep_delta_linear = 2e-3;
  double sleep_delta_angular = 1e-2;

  bool with_table = true;
  bool with_floor = true;
};

struct BodyState {
  Pose pose;
  Vec3 linear_velocity = Vec3::Zero();
  Vec3 angular_velocity = Vec3::Zero();
};

struct Body {
  ObjectClass cls;
  Shape shape;
  double mass;
  Vec3 inertia;  // principal moments, body frame
  BodyState state;
  bool asleep = false;
  int still_steps = 0;
  Vec3 window_linear = Vec3::Zero();   // velocities when the still window began
  Vec3 window_angular = Vec3::Zero();

  Mat3 inverse_inertia_world() const;
};

/// A pair starting to touch. `b` empty means the table.
struct ContactEvent {
  double t;
  ObjectClass a;
  std::optional<ObjectClass> b;
  double impulse_magnitude;

  bool operator==(const ContactEvent&) const = default;
};

struct SimulationResult {
  std::vector<Trajectory> trajectories;  // scene order
  std::vector<ContactEvent> contacts;    // time ordered

  const Trajectory* find(ObjectClass c) const;
  bool operator==(const SimulationResult&) const = default;
};

/// Bodies for every scene object, at rest, in scene order.
std::vector<Body> make_bodies(const Scene& scene);

/// Applies an action impulse / removal / teleport. Removed bodies are erased.
/// Throws DataError("unknown action target") when the target or onto object
/// is absent.
std::vector<Body> apply_action(std::vector<Body> bodies, const Action& action, const Params& params = {});

class World {
 public:
  World(Table table, std::vector<Body> bodies, Params params = {});

  /// Advances one step. Throws SimulationError when the state stops being finite.
  void step();

  const std::vector<Body>& bodies() const { return bodies_; }
  std::vector<Body>& bodies() { return bodies_; }
  const Body* find(ObjectClass c) const;
  const Table& table() const { return table_; }
  const Params& params() const { return params_; }
  long step_count() const { return steps_; }
  double time() const { return steps_ * params_.dt; }

  /// Events logged so far (pairs that begin touching).
  const std::vector<ContactEvent>& contact_log() const { return log_; }

  /// Kinetic energy plus gravitational potential energy measured from the floor.
  double mechanical_energy() const;

  /// Deepest penetration among all current pairs, including the table and floor.
  double max_penetration() const;

  /// Marks every body with a support contact as sleeping, all others awake.
  void sleep_supported();
  /// Wakes every sleeping body within `margin` of the given pose.
  void wake_near(const Shape& shape, const Pose& pose, double margin);

 private:
  struct Contact;
  using PairImpulse = std::pair<std::pair<int, int>, double>;
  bool still(const Body& b) const;
  int substeps() const;
  struct StepLog {
    std::vector<char> contacted;  // received a contact or recovery impulse
    std::vector<Vec3> start;      // translations when the step began
  };
  void substep(double dt, std::vector<PairImpulse>& pair_impulse, StepLog& log);
  void limit_energy(double before, const StepLog& log);
  void gather_contacts(std::vector<Contact>& out);
  void wake_touching();

  Table table_;
  std::vector<Body> bodies_;
  Params params_;
  long steps_ = 0;
  std::vector<ContactEvent> log_;
  std::vector<std::pair<int, int>> touching_;  // pairs with positive impulse last step; -1 = table
};

/// One second of passive simulation from rest; returns the scene with the
/// resulting poses. `seed` is accepted for interface stability and does not
/// influence the integrator.
Scene settle(const Scene& scene, std::uint64_t seed, const Params& params = {});

/// Applies the action at t = 0 and integrates 1500 steps of 1/300 s,
/// recording every pose. Deterministic in its inputs.
SimulationResult simulate(const Scene& scene, const Action& action, std::uint64_t seed, const Params& params = {});

/// Exact subsample keeping samples 0, stride, 2·stride, ...
Trajectory downsample(const Trajectory& trajectory, int stride = 10);

}  // namespace whatif::physics
