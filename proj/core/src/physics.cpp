#include "whatif/physics.hpp"

#include "whatif/error.hpp"
#include "whatif/geometry.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <string>

namespace whatif::physics {
namespace {

constexpr int kTable = -1;
constexpr int kFloor = -2;
constexpr double kSupportGap = 1e-3;
constexpr double kSweepTolerance = 2e-4;
constexpr int kMaxSubsteps = 4;

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

/// Torque-free implicit Euler step of the body-frame Euler equations,
/// I (w' - w) + dt w' x (I w') = 0, solved by Newton iteration. The exact
/// solution never increases rotational kinetic energy.
Vec3 gyroscopic_update(const Vec3& w_body, const Vec3& inertia, double dt) {
  const Mat3 I = inertia.asDiagonal();
  Vec3 w = w_body;
  for (int it = 0; it < 6; ++it) {
    const Vec3 Iw = I * w;
    const Vec3 f = I * (w - w_body) + dt * w.cross(Iw);
    if (f.norm() <= 1e-15 * (1.0 + Iw.norm())) break;
    const Mat3 J = I + dt * (skew(w) * I - skew(Iw));
    w -= J.partialPivLu().solve(f);
  }
  return w;
}

double max_speed_reach(const Body& b, double dt, double gravity) {
  return dt * (b.state.linear_velocity.norm() + b.state.angular_velocity.norm() * geometry::bounding_radius(b.shape) +
               gravity * dt);
}

int find_index(const std::vector<Body>& bodies, ObjectClass c) {
  for (std::size_t i = 0; i < bodies.size(); ++i)
    if (bodies[i].cls == c) return static_cast<int>(i);
  return -1;
}

}  // namespace

Mat3 Body::inverse_inertia_world() const {
  const Mat3& r = state.pose.rotation;
  return r * inertia.cwiseInverse().asDiagonal() * r.transpose();
}

const Trajectory* SimulationResult::find(ObjectClass c) const {
  for (const auto& t : trajectories)
    if (t.cls == c) return &t;
  return nullptr;
}

struct World::Contact {
  int a;
  int b;  // body index, kTable or kFloor
  Vec3 normal;
  Vec3 ra;
  Vec3 rb;
  Vec3 t1;
  Vec3 t2;
  double separation;
  double mu;
  double mass_n = 0.0;
  double mass_t1 = 0.0;
  double mass_t2 = 0.0;
  double target = 0.0;
  double bias = 0.0;  // penetration recovery speed, solved on pseudo-velocities
  double vn0 = 0.0;
  double ln = 0.0;
  double lt1 = 0.0;
  double lt2 = 0.0;
  double lb = 0.0;
};

std::vector<Body> make_bodies(const Scene& scene) {
  std::vector<Body> bodies;
  bodies.reserve(scene.objects.size());
  for (const auto& o : scene.objects) {
    Body b{o.cls, o.shape, o.mass, geometry::principal_inertia(o.shape, o.mass), BodyState{o.pose}};
    bodies.push_back(std::move(b));
  }
  return bodies;
}

std::vector<Body> apply_action(std::vector<Body> bodies, const Action& action, const Params& params) {
  const int target = find_index(bodies, action.target);
  if (target < 0) throw DataError("unknown action target: " + std::string(class_id(action.target)));
  Body& body = bodies[target];
  body.asleep = false;
  body.still_steps = 0;
  switch (action.kind) {
    case ActionKind::Push: {
      const double angle = std::get<PushParams>(action.params).direction_angle;
      const Vec3 impulse = params.push_impulse * Vec3(std::cos(angle), std::sin(angle), 0.0);
      body.state.linear_velocity += impulse / body.mass;
      break;
    }
    case ActionKind::Rotate: {
      const double sign = std::get<RotateParams>(action.params).sense == RotationSense::CCW ? 1.0 : -1.0;
      body.state.angular_velocity += body.inverse_inertia_world() * Vec3(0.0, 0.0, sign * params.rotate_impulse);
      break;
    }
    case ActionKind::Remove:
      bodies.erase(bodies.begin() + target);
      break;
    case ActionKind::Drop: {
      const int onto = find_index(bodies, std::get<DropParams>(action.params).onto);
      if (onto < 0) throw DataError("unknown action target: " + std::string(class_id(std::get<DropParams>(action.params).onto)));
      const Body& support = bodies[onto];
      const double top = geometry::highest_z(support.shape, support.state.pose);
      Pose& pose = body.state.pose;
      const double below_center = pose.translation.z() - geometry::lowest_z(body.shape, pose);
      pose.translation = Vec3(support.state.pose.translation.x(), support.state.pose.translation.y(),
                              top + params.drop_height + below_center);
      body.state.linear_velocity.setZero();
      body.state.angular_velocity.setZero();
      break;
    }
  }
  return bodies;
}

World::World(Table table, std::vector<Body> bodies, Params params)
    : table_(table), bodies_(std::move(bodies)), params_(params) {}

const Body* World::find(ObjectClass c) const {
  const int i = find_index(bodies_, c);
  return i < 0 ? nullptr : &bodies_[i];
}

double World::mechanical_energy() const {
  const double g = -params_.gravity.z();
  const double floor = table_.floor();
  double e = 0.0;
  for (const auto& b : bodies_) {
    const Vec3& w = b.state.angular_velocity;
    const Mat3& r = b.state.pose.rotation;
    const Vec3 wb = r.transpose() * w;
    e += 0.5 * b.mass * b.state.linear_velocity.squaredNorm();
    e += 0.5 * wb.dot(b.inertia.cwiseProduct(wb));
    e += b.mass * g * (b.state.pose.translation.z() - floor);
  }
  return e;
}

double World::max_penetration() const {
  std::vector<geometry::ContactPoint> pts;
  for (std::size_t i = 0; i < bodies_.size(); ++i) {
    const Body& a = bodies_[i];
    for (std::size_t j = i + 1; j < bodies_.size(); ++j)
      geometry::collide(a.shape, a.state.pose, bodies_[j].shape, bodies_[j].state.pose, 0.0, pts);
    if (params_.with_table) geometry::collide_table(a.shape, a.state.pose, table_, 0.0, pts);
    if (params_.with_floor) geometry::collide_plane(a.shape, a.state.pose, table_.floor(), 0.0, pts);
  }
  double depth = 0.0;
  for (const auto& p : pts) depth = std::max(depth, -p.separation);
  return depth;
}

void World::sleep_supported() {
  if (!params_.sleeping) return;
  std::vector<geometry::ContactPoint> pts;
  for (std::size_t i = 0; i < bodies_.size(); ++i) {
    Body& a = bodies_[i];
    pts.clear();
    if (params_.with_table) geometry::collide_table(a.shape, a.state.pose, table_, kSupportGap, pts);
    if (params_.with_floor) geometry::collide_plane(a.shape, a.state.pose, table_.floor(), kSupportGap, pts);
    for (std::size_t j = 0; j < bodies_.size() && pts.empty(); ++j)
      if (j != i) geometry::collide(a.shape, a.state.pose, bodies_[j].shape, bodies_[j].state.pose, kSupportGap, pts);
    a.asleep = !pts.empty();
    if (a.asleep) {
      a.state.linear_velocity.setZero();
      a.state.angular_velocity.setZero();
    }
  }
}

void World::wake_near(const Shape& shape, const Pose& pose, double margin) {
  std::vector<geometry::ContactPoint> pts;
  for (auto& b : bodies_) {
    if (!b.asleep) continue;
    pts.clear();
    geometry::collide(b.shape, b.state.pose, shape, pose, margin, pts);
    if (!pts.empty()) {
      b.asleep = false;
      b.still_steps = 0;
    }
  }
}

void World::wake_touching() {
  const double g = -params_.gravity.z();
  std::vector<geometry::ContactPoint> pts;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < bodies_.size(); ++i) {
      if (bodies_[i].asleep || still(bodies_[i])) continue;
      for (std::size_t j = 0; j < bodies_.size(); ++j) {
        if (!bodies_[j].asleep) continue;
        const Body& a = bodies_[i];
        const double margin = params_.speculative_margin + max_speed_reach(a, params_.dt, g);
        pts.clear();
        geometry::collide(a.shape, a.state.pose, bodies_[j].shape, bodies_[j].state.pose, margin, pts);
        if (!pts.empty()) {
          bodies_[j].asleep = false;
          bodies_[j].still_steps = 0;
          changed = true;
        }
      }
    }
  }
}

void World::gather_contacts(std::vector<Contact>& out) {
  const double g = -params_.gravity.z();
  std::vector<geometry::ContactPoint> pts;
  auto emit = [&](int a, int b, double mu) {
    for (const auto& p : pts) {
      Contact c{};
      c.a = a;
      c.b = b;
      c.normal = p.normal;
      c.ra = p.point - bodies_[a].state.pose.translation;
      c.rb = b >= 0 ? Vec3(p.point - bodies_[b].state.pose.translation) : Vec3::Zero();
      c.separation = p.separation;
      c.mu = mu;
      out.push_back(c);
    }
    pts.clear();
  };
  // Sleeping bodies collide with awake ones as static obstacles.
  for (std::size_t i = 0; i < bodies_.size(); ++i) {
    const Body& a = bodies_[i];
    const double reach_a = max_speed_reach(a, params_.dt, g);
    for (std::size_t j = i + 1; j < bodies_.size(); ++j) {
      const Body& b = bodies_[j];
      if (a.asleep && b.asleep) continue;
      const double margin = params_.speculative_margin + reach_a + max_speed_reach(b, params_.dt, g);
      geometry::collide(a.shape, a.state.pose, b.shape, b.state.pose, margin, pts);
      emit(static_cast<int>(i), static_cast<int>(j), params_.friction_object);
    }
    if (a.asleep) continue;
    const double margin = params_.speculative_margin + reach_a;
    if (params_.with_table) {
      geometry::collide_table(a.shape, a.state.pose, table_, margin, pts);
      emit(static_cast<int>(i), kTable, params_.friction_table);
    }
    if (params_.with_floor) {
      geometry::collide_plane(a.shape, a.state.pose, table_.floor(), margin, pts);
      emit(static_cast<int>(i), kFloor, params_.friction_table);
    }
  }
}

void World::substep(double dt, std::vector<PairImpulse>& pair_impulse, StepLog& log) {
  std::vector<Contact> contacts;
  gather_contacts(contacts);

  // Velocity forces: gravity and gyroscopic coupling.
  const std::size_t n = bodies_.size();
  std::vector<Mat3> inv_inertia(n, Mat3::Zero());
  std::vector<double> inv_mass(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    Body& b = bodies_[i];
    if (b.asleep) continue;
    b.state.linear_velocity += params_.gravity * dt;
    const Mat3& r = b.state.pose.rotation;
    b.state.angular_velocity = r * gyroscopic_update(r.transpose() * b.state.angular_velocity, b.inertia, dt);
    inv_inertia[i] = b.inverse_inertia_world();
    inv_mass[i] = 1.0 / b.mass;
  }

  auto velocity_at = [&](int body, const Vec3& r) -> Vec3 {
    if (body < 0) return Vec3::Zero();
    const auto& s = bodies_[body].state;
    return s.linear_velocity + s.angular_velocity.cross(r);
  };
  auto relative_velocity = [&](const Contact& c) -> Vec3 { return velocity_at(c.a, c.ra) - velocity_at(c.b, c.rb); };
  auto effective_mass = [&](const Contact& c, const Vec3& dir) {
    double k = inv_mass[c.a];
    const Vec3 ca = c.ra.cross(dir);
    k += ca.dot(inv_inertia[c.a] * ca);
    if (c.b >= 0) {
      const Vec3 cb = c.rb.cross(dir);
      k += inv_mass[c.b] + cb.dot(inv_inertia[c.b] * cb);
    }
    return k > 0.0 ? 1.0 / k : 0.0;
  };
  auto apply_impulse = [&](const Contact& c, const Vec3& p) {
    auto& sa = bodies_[c.a].state;
    sa.linear_velocity += inv_mass[c.a] * p;
    sa.angular_velocity += inv_inertia[c.a] * c.ra.cross(p);
    if (c.b >= 0) {
      auto& sb = bodies_[c.b].state;
      sb.linear_velocity -= inv_mass[c.b] * p;
      sb.angular_velocity -= inv_inertia[c.b] * c.rb.cross(p);
    }
  };

  for (auto& c : contacts) {
    const Vec3 v = relative_velocity(c);
    c.vn0 = v.dot(c.normal);
    const Vec3 vt = v - c.vn0 * c.normal;
    if (vt.norm() > 1e-9) {
      c.t1 = vt.normalized();
    } else {
      const Vec3 seed = std::abs(c.normal.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
      c.t1 = c.normal.cross(seed).normalized();
    }
    c.t2 = c.normal.cross(c.t1);
    c.mass_n = effective_mass(c, c.normal);
    c.mass_t1 = effective_mass(c, c.t1);
    c.mass_t2 = effective_mass(c, c.t2);
    c.target = c.separation > 0.0 ? -c.separation / dt : 0.0;
    c.bias = params_.baumgarte * std::max(0.0, -c.separation - params_.penetration_slop) / dt;
  }

  for (int it = 0; it < params_.iterations; ++it) {
    for (auto& c : contacts) {
      // Friction first so the normal row has the final say on each pass.
      const double limit = c.mu * c.ln;
      const Vec3 v = relative_velocity(c);
      const double new1 = c.lt1 - c.mass_t1 * v.dot(c.t1);
      const double new2 = c.lt2 - c.mass_t2 * v.dot(c.t2);
      double scale = 1.0;
      const double mag = std::hypot(new1, new2);
      if (mag > limit) scale = mag > 0.0 ? limit / mag : 0.0;
      const double d1 = new1 * scale - c.lt1;
      const double d2 = new2 * scale - c.lt2;
      c.lt1 += d1;
      c.lt2 += d2;
      apply_impulse(c, d1 * c.t1 + d2 * c.t2);

      const double vn = relative_velocity(c).dot(c.normal);
      const double ln = std::max(0.0, c.ln + c.mass_n * (c.target - vn));
      apply_impulse(c, (ln - c.ln) * c.normal);
      c.ln = ln;
    }
  }

  for (auto& c : contacts) {
    if (c.ln <= 0.0 || c.separation > params_.penetration_slop || c.vn0 > -params_.restitution_threshold) continue;
    const double vn = relative_velocity(c).dot(c.normal);
    const double target = -params_.restitution * c.vn0;
    if (vn >= target) continue;
    const double ln = std::max(0.0, c.ln + c.mass_n * (target - vn));
    apply_impulse(c, (ln - c.ln) * c.normal);
    c.ln = ln;
  }

  // Split impulse: penetration is recovered through pseudo-velocities that
  // move positions only, so the recovery adds no kinetic energy.
  std::vector<Vec3> bias_v(n, Vec3::Zero()), bias_w(n, Vec3::Zero());
  auto bias_velocity = [&](const Contact& c) {
    Vec3 u = bias_v[c.a] + bias_w[c.a].cross(c.ra);
    if (c.b >= 0) u -= bias_v[c.b] + bias_w[c.b].cross(c.rb);
    return u.dot(c.normal);
  };
  for (int it = 0; it < params_.iterations; ++it) {
    for (auto& c : contacts) {
      if (c.bias <= 0.0) continue;
      const double lb = std::max(0.0, c.lb + c.mass_n * (c.bias - bias_velocity(c)));
      const Vec3 p = (lb - c.lb) * c.normal;
      c.lb = lb;
      bias_v[c.a] += inv_mass[c.a] * p;
      bias_w[c.a] += inv_inertia[c.a] * c.ra.cross(p);
      if (c.b >= 0) {
        bias_v[c.b] -= inv_mass[c.b] * p;
        bias_w[c.b] -= inv_inertia[c.b] * c.rb.cross(p);
      }
    }
  }

  // Position update from the solved velocities. Bodies that received no
  // contact impulse are in free flight and take the exact constant-gravity
  // displacement.
  std::vector<char> loaded(n, 0);
  for (const auto& c : contacts) {
    if (c.ln <= 0.0) continue;
    loaded[c.a] = 1;
    if (c.b >= 0) loaded[c.b] = 1;
  }
  for (std::size_t i = 0; i < n; ++i) {
    Body& b = bodies_[i];
    if (b.asleep) continue;
    auto& s = b.state;
    log.contacted[i] = log.contacted[i] || loaded[i] || !bias_v[i].isZero();
    s.pose.translation += (s.linear_velocity + bias_v[i]) * dt;
    if (!loaded[i]) s.pose.translation -= 0.5 * params_.gravity * dt * dt;
    const Vec3 spin = s.angular_velocity + bias_w[i];
    const double w = spin.norm();
    if (w > 0.0) {
      Eigen::Quaterniond q(s.pose.rotation);
      q = Eigen::Quaterniond(Eigen::AngleAxisd(w * dt, spin / w)) * q;
      q.normalize();
      s.pose.rotation = q.toRotationMatrix();
    }
    if (!s.pose.translation.allFinite() || !s.pose.rotation.allFinite() || !s.linear_velocity.allFinite() ||
        !s.angular_velocity.allFinite()) {
      throw SimulationError("simulation diverged at step " + std::to_string(steps_), steps_);
    }
  }

  for (const auto& c : contacts) {
    if (c.b == kFloor || c.ln <= 0.0) continue;
    const std::pair<int, int> key = c.b == kTable ? std::pair{c.a, kTable} : std::pair{std::min(c.a, c.b), std::max(c.a, c.b)};
    auto it = std::find_if(pair_impulse.begin(), pair_impulse.end(), [&](const auto& e) { return e.first == key; });
    if (it == pair_impulse.end()) pair_impulse.push_back({key, c.ln});
    else it->second += c.ln;
  }
}

void World::limit_energy(double before, const StepLog& log) {
  // Velocity-level contact solving and penetration recovery can leave a step
  // with slightly more energy than it began with. The excess is taken from the
  // kinetic energy of the bodies in contact during the step, then, if that is
  // not enough, by undoing part of their rise over the step.
  double excess = mechanical_energy() - before;
  if (!(excess > 0.0)) return;
  double kinetic = 0.0;
  for (std::size_t i = 0; i < bodies_.size(); ++i) {
    const Body& b = bodies_[i];
    if (!log.contacted[i] || b.asleep) continue;
    const Vec3 wb = b.state.pose.rotation.transpose() * b.state.angular_velocity;
    kinetic += 0.5 * b.mass * b.state.linear_velocity.squaredNorm() + 0.5 * wb.dot(b.inertia.cwiseProduct(wb));
  }
  if (kinetic > 0.0) {
    const double scale = std::sqrt(std::max(0.0, kinetic - excess) / kinetic);
    for (std::size_t i = 0; i < bodies_.size(); ++i) {
      Body& b = bodies_[i];
      if (!log.contacted[i] || b.asleep) continue;
      b.state.linear_velocity *= scale;
      b.state.angular_velocity *= scale;
    }
    excess = mechanical_energy() - before;
    if (!(excess > 0.0)) return;
  }
  const double g = -params_.gravity.z();
  std::vector<Vec3> moved(bodies_.size(), Vec3::Zero());
  double lift = 0.0;
  for (std::size_t i = 0; i < bodies_.size(); ++i) {
    if (!log.contacted[i]) continue;
    moved[i] = bodies_[i].state.pose.translation - log.start[i];
    lift += bodies_[i].mass * g * std::max(0.0, moved[i].z());
  }
  if (lift <= 0.0) return;
  const double undo = std::min(1.0, excess / lift);
  for (std::size_t i = 0; i < bodies_.size(); ++i)
    if (moved[i].z() > 0.0) bodies_[i].state.pose.translation -= undo * moved[i];
}

bool World::still(const Body& b) const {
  return b.state.linear_velocity.norm() < params_.sleep_linear && b.state.angular_velocity.norm() < params_.sleep_angular;
}

int World::substeps() const {
  // Rotating contacts sweep their features by about w^2 R h^2 per substep,
  // which the linearized solver cannot see.
  // Spin about a symmetry axis leaves the surface in place.
  double sweep = 0.0;
  for (const auto& b : bodies_) {
    if (b.asleep || std::holds_alternative<Sphere>(b.shape)) continue;
    Vec3 w = b.state.angular_velocity;
    if (std::holds_alternative<Cylinder>(b.shape)) {
      const Vec3 axis = b.state.pose.rotation.col(2);
      w -= w.dot(axis) * axis;
    }
    sweep = std::max(sweep, w.squaredNorm() * geometry::bounding_radius(b.shape));
  }
  sweep *= params_.dt * params_.dt;
  const int n = static_cast<int>(std::ceil(std::sqrt(sweep / kSweepTolerance)));
  return std::clamp(n, 1, kMaxSubsteps);
}

void World::step() {
  if (params_.sleeping) wake_touching();
  const int n = substeps();
  const std::size_t count = bodies_.size();
  const double energy_before = mechanical_energy();
  std::vector<PairImpulse> pair_impulse;
  StepLog log{std::vector<char>(count, 0), {}};
  for (const auto& b : bodies_) log.start.push_back(b.state.pose.translation);
  for (int k = 0; k < n; ++k) substep(params_.dt / n, pair_impulse, log);
  limit_energy(energy_before, log);

  for (std::size_t i = 0; i < count; ++i) {
    Body& b = bodies_[i];
    if (b.asleep || !params_.sleeping) continue;
    auto& s = b.state;
    if (!still(b)) {
      b.still_steps = 0;
      continue;
    }
    if (b.still_steps++ == 0) {
      b.window_linear = s.linear_velocity;
      b.window_angular = s.angular_velocity;
    }
    if (b.still_steps < params_.sleep_steps) continue;
    if ((s.linear_velocity - b.window_linear).norm() > params_.sleep_delta_linear ||
        (s.angular_velocity - b.window_angular).norm() > params_.sleep_delta_angular) {
      b.still_steps = 0;
      continue;
    }
    b.asleep = true;
    s.linear_velocity.setZero();
    s.angular_velocity.setZero();
  }

  // Contact onset log.
  const double t = static_cast<double>(steps_ + 1) * params_.dt;
  std::vector<std::pair<int, int>> touching;
  for (const auto& [key, impulse] : pair_impulse) {
    touching.push_back(key);
    if (std::find(touching_.begin(), touching_.end(), key) != touching_.end()) continue;
    ContactEvent e{t, bodies_[key.first].cls, std::nullopt, impulse};
    if (key.second >= 0) e.b = bodies_[key.second].cls;
    log_.push_back(e);
  }
  // Pairs involving a sleeping body keep their touching status.
  for (const auto& key : touching_) {
    const bool sleeping = bodies_[key.first].asleep || (key.second >= 0 && bodies_[key.second].asleep);
    if (sleeping && std::find(touching.begin(), touching.end(), key) == touching.end()) touching.push_back(key);
  }
  touching_ = std::move(touching);
  ++steps_;
}

Scene settle(const Scene& scene, std::uint64_t /*seed*/, const Params& params) {
  World world(scene.table, make_bodies(scene), params);
  for (int k = 0; k < kSettleSteps; ++k) world.step();
  Scene out = scene;
  for (std::size_t i = 0; i < out.objects.size(); ++i) out.objects[i].pose = world.bodies()[i].state.pose;
  return out;
}

SimulationResult simulate(const Scene& scene, const Action& action, std::uint64_t /*seed*/, const Params& params) {
  if (auto v = action_violation(action)) throw DataError(*v);
  World rest(scene.table, make_bodies(scene), params);
  rest.sleep_supported();
  std::vector<Body> bodies = rest.bodies();

  const Body* target = rest.find(action.target);
  if (!target) throw DataError("unknown action target: " + std::string(class_id(action.target)));
  const Shape old_shape = target->shape;
  const Pose old_pose = target->state.pose;

  World world(scene.table, apply_action(std::move(bodies), action, params), params);
  if (action.kind == ActionKind::Remove || action.kind == ActionKind::Drop)
    world.wake_near(old_shape, old_pose, params.speculative_margin);

  SimulationResult result;
  std::vector<int> body_of(scene.objects.size(), -1);
  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    Trajectory t{scene.objects[i].cls, {}, false};
    for (std::size_t j = 0; j < world.bodies().size(); ++j)
      if (world.bodies()[j].cls == t.cls) body_of[i] = static_cast<int>(j);
    if (body_of[i] < 0) t.removed = true;
    else t.samples.reserve(kSimulationSteps);
    result.trajectories.push_back(std::move(t));
  }
  for (int k = 0; k < kSimulationSteps; ++k) {
    world.step();
    const double t = world.time();
    for (std::size_t i = 0; i < body_of.size(); ++i) {
      if (body_of[i] < 0) continue;
      result.trajectories[i].samples.push_back({t, world.bodies()[body_of[i]].state.pose});
    }
  }
  result.contacts = world.contact_log();
  return result;
}

Trajectory downsample(const Trajectory& trajectory, int stride) {
  if (stride <= 0) throw DataError("downsample stride must be positive");
  Trajectory out{trajectory.cls, {}, trajectory.removed};
  for (std::size_t i = 0; i < trajectory.samples.size(); i += static_cast<std::size_t>(stride))
    out.samples.push_back(trajectory.samples[i]);
  return out;
}

}  // namespace whatif::physics
