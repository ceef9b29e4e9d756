#include "doctest.h"
#include "fixtures.hpp"

#include "whatif/datagen.hpp"
#include "whatif/error.hpp"
#include "whatif/physics.hpp"

#include <chrono>
#include <cmath>

using namespace whatif;
using physics::Body;
using physics::Params;
using physics::World;

namespace {

Body free_body(ObjectClass c, const Vec3& at) {
  const auto& g = lexicon::geometry(c);
  Body b{c, g.shape, g.mass, geometry::principal_inertia(g.shape, g.mass), {}};
  b.state.pose.translation = at;
  b.state.pose.rotation = g.base_rotation;
  return b;
}

double tilt_degrees(const Mat3& r) {
  // Angle between the body z axis and world z.
  return std::acos(std::clamp(r(2, 2), -1.0, 1.0)) * 180.0 / M_PI;
}

}  // namespace

TEST_CASE("ballistic sphere follows the closed-form parabola") {
  Params p;
  p.with_table = false;
  p.with_floor = false;
  Body ball = free_body(ObjectClass::Softball, Vec3(0, 0, 5));
  const Vec3 v0(1.0, -0.5, 2.0);
  ball.state.linear_velocity = v0;
  World world(Table{}, {ball}, p);
  const int steps = 150;  // 0.5 s
  for (int k = 0; k < steps; ++k) world.step();
  const double t = steps * p.dt;
  // Closed form x(t) = x0 + v0 t + g t^2 / 2.
  const Vec3 exact = Vec3(0, 0, 5) + v0 * t + 0.5 * p.gravity * t * t;
  CHECK((world.bodies()[0].state.pose.translation - exact).norm() < 1e-3);
}

TEST_CASE("contact-free linear momentum changes only by the gravity impulse") {
  Params p;
  p.with_table = false;
  p.with_floor = false;
  Body box = free_body(ObjectClass::CheezitBox, Vec3(0, 0, 2));
  box.state.linear_velocity = Vec3(0.3, -0.2, 0.1);
  box.state.angular_velocity = Vec3(1.0, 2.0, -0.5);
  World world(Table{}, {box}, p);
  for (int k = 0; k < 100; ++k) {
    const Vec3 before = world.bodies()[0].mass * world.bodies()[0].state.linear_velocity;
    world.step();
    const Vec3 after = world.bodies()[0].mass * world.bodies()[0].state.linear_velocity;
    const Vec3 expected = before + world.bodies()[0].mass * p.gravity * p.dt;
    CHECK((after - expected).norm() <= 1e-9 * std::max(1.0, expected.norm()));
  }
}

TEST_CASE("sphere at rest on the table stays put through settle") {
  Scene s = fixtures::isolated_scene();
  const Scene settled = physics::settle(s, 0);
  const auto* before = s.find(ObjectClass::Softball);
  const auto* after = settled.find(ObjectClass::Softball);
  CHECK((before->pose.translation - after->pose.translation).norm() < 1e-3);
}

TEST_CASE("sphere released above the table rests at its radius") {
  Scene s = fixtures::isolated_scene();
  for (auto& o : s.objects)
    if (o.cls == ObjectClass::Softball) o.pose.translation.z() += 0.2;
  const Scene settled = physics::settle(s, 0);
  const double r = std::get<Sphere>(lexicon::geometry(ObjectClass::Softball).shape).radius;
  CHECK(std::abs(settled.find(ObjectClass::Softball)->pose.translation.z() - r) < 5e-3);
}

TEST_CASE("box tilted five degrees about an edge settles flat") {
  Scene s = fixtures::isolated_scene();
  for (auto& o : s.objects) {
    if (o.cls != ObjectClass::FoamBrick) continue;
    const Box box = std::get<Box>(o.shape);
    // Rotate about the bottom edge at y = -h.y.
    const Mat3 tilt = Eigen::AngleAxisd(5.0 * M_PI / 180.0, Vec3::UnitX()).toRotationMatrix();
    const Vec3 edge = o.pose.translation + Vec3(0, -box.half_extents.y(), -box.half_extents.z());
    o.pose.rotation = tilt;
    o.pose.translation = edge + tilt * Vec3(0, box.half_extents.y(), box.half_extents.z());
  }
  const Scene settled = physics::settle(s, 0);
  const auto* brick = settled.find(ObjectClass::FoamBrick);
  CHECK(tilt_degrees(brick->pose.rotation) < 1.0);
  const double hz = std::get<Box>(brick->shape).half_extents.z();
  CHECK(std::abs(brick->pose.translation.z() - hz) < 2e-3);
}

TEST_CASE("sliding box decelerates at mu g") {
  Params p;
  p.sleeping = false;
  const Scene s = fixtures::scene_of({{ObjectClass::CheezitBox, -0.3, 0.0}});
  auto bodies = physics::make_bodies(s);
  bodies[0].state.linear_velocity = Vec3(1.5, 0.0, 0.0);
  World world(s.table, bodies, p);
  // Skip the first steps where the contact establishes.
  for (int k = 0; k < 5; ++k) world.step();
  const double v1 = world.bodies()[0].state.linear_velocity.x();
  const int steps = 60;
  for (int k = 0; k < steps; ++k) world.step();
  const double v2 = world.bodies()[0].state.linear_velocity.x();
  const double decel = (v1 - v2) / (steps * p.dt);
  CHECK(decel == doctest::Approx(p.friction_table * kGravity).epsilon(0.05));
}

TEST_CASE("head-on equal-mass spheres with zero restitution equalize velocities") {
  Params p;
  p.restitution = 0.0;
  p.with_table = false;
  p.with_floor = false;
  p.gravity = Vec3::Zero();
  p.friction_object = 0.0;
  Body a = free_body(ObjectClass::Softball, Vec3(-0.2, 0, 1));
  Body b = free_body(ObjectClass::Softball, Vec3(0.2, 0, 1));
  b.cls = ObjectClass::Banana;  // distinct label, same sphere
  a.state.linear_velocity = Vec3(1.0, 0, 0);
  World world(Table{}, {a, b}, p);
  for (int k = 0; k < 150; ++k) world.step();
  const double va = world.bodies()[0].state.linear_velocity.x();
  const double vb = world.bodies()[1].state.linear_velocity.x();
  CHECK(va == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(vb == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("apply_action impulses") {
  const Scene s = fixtures::isolated_scene();
  const auto bodies = physics::make_bodies(s);
  const Params p;

  SUBCASE("push along +x adds J/m") {
    const auto out = physics::apply_action(bodies, Action::push(ObjectClass::CoffeeCan, 0.0), p);
    const auto& can = out[3];
    CHECK(can.state.linear_velocity.x() == doctest::Approx(p.push_impulse / can.mass));
    CHECK(std::abs(can.state.linear_velocity.y()) < 1e-15);
  }
  SUBCASE("rotate CW lowers angular z velocity by L / I_z") {
    const auto out = physics::apply_action(bodies, Action::rotate(ObjectClass::Softball, RotationSense::CW), p);
    const auto& ball = out[2];
    CHECK(ball.state.angular_velocity.z() == doctest::Approx(-p.rotate_impulse / ball.inertia.z()));
  }
  SUBCASE("remove deletes the body") {
    const auto out = physics::apply_action(bodies, Action::remove(ObjectClass::Screwdriver), p);
    CHECK(out.size() == 4);
    for (const auto& b : out) CHECK(b.cls != ObjectClass::Screwdriver);
  }
  SUBCASE("drop teleports above the onto object") {
    const auto out = physics::apply_action(bodies, Action::drop(ObjectClass::Banana, ObjectClass::FoamBrick), p);
    const auto& banana = out[4];
    const auto& foam = out[0];
    CHECK(banana.state.pose.translation.x() == doctest::Approx(foam.state.pose.translation.x()));
    CHECK(geometry::lowest_z(banana.shape, banana.state.pose) ==
          doctest::Approx(geometry::highest_z(foam.shape, foam.state.pose) + p.drop_height));
  }
  SUBCASE("missing target") {
    CHECK_THROWS_AS(physics::apply_action(bodies, Action::remove(ObjectClass::CheezitBox), p), DataError);
    CHECK_THROWS_AS(physics::apply_action(bodies, Action::drop(ObjectClass::Banana, ObjectClass::CheezitBox), p),
                    DataError);
  }
}

TEST_CASE("simulate: remove sets the removed flag, others have 1500 samples") {
  const Scene s = physics::settle(fixtures::isolated_scene(), 0);
  const auto result = physics::simulate(s, Action::remove(ObjectClass::Screwdriver), 0);
  REQUIRE(result.trajectories.size() == 5);
  for (const auto& t : result.trajectories) {
    if (t.cls == ObjectClass::Screwdriver) {
      CHECK(t.removed);
      CHECK(t.samples.empty());
    } else {
      CHECK_FALSE(t.removed);
      CHECK(t.samples.size() == 1500);
      CHECK(t.samples.front().t == doctest::Approx(1.0 / 300.0));
      CHECK(t.samples.back().t == doctest::Approx(5.0));
    }
  }
}

TEST_CASE("simulate: pushing an isolated object leaves the others exactly still") {
  const Scene s = physics::settle(fixtures::isolated_scene(), 0);
  const auto result = physics::simulate(s, Action::push(ObjectClass::CoffeeCan, -M_PI / 2), 0);
  for (const auto& t : result.trajectories) {
    const Vec3 first = t.samples.front().pose.translation;
    double max_dev = 0.0;
    for (const auto& smp : t.samples) max_dev = std::max(max_dev, (smp.pose.translation - first).norm());
    if (t.cls == ObjectClass::CoffeeCan) CHECK(max_dev > 0.05);
    else CHECK(max_dev <= 1e-9);
  }
}

TEST_CASE("simulate: dropped softball hits the foam brick before one second") {
  const Scene s = physics::settle(fixtures::isolated_scene(), 0);
  const auto result = physics::simulate(s, Action::drop(ObjectClass::Softball, ObjectClass::FoamBrick), 0);
  // Free fall over the drop height takes sqrt(2h/g) ~ 0.23 s.
  const double fall = std::sqrt(2.0 * Params{}.drop_height / kGravity);
  bool found = false;
  for (const auto& e : result.contacts) {
    const bool pair = (e.a == ObjectClass::Softball && e.b == ObjectClass::FoamBrick) ||
                      (e.a == ObjectClass::FoamBrick && e.b == ObjectClass::Softball);
    if (pair) {
      found = true;
      CHECK(e.t < 1.0);
      CHECK(e.t == doctest::Approx(fall).epsilon(0.1));
      break;
    }
  }
  CHECK(found);
}

TEST_CASE("simulate is bit-identical across runs") {
  const Scene s = physics::settle(fixtures::row1_scene(), 0);
  const Action a = Action::drop(ObjectClass::Screwdriver, ObjectClass::FoamBrick);
  const auto r1 = physics::simulate(s, a, 3);
  const auto r2 = physics::simulate(s, a, 3);
  CHECK(r1 == r2);
}

TEST_CASE("emitted rotations stay orthonormal") {
  const Scene s = physics::settle(fixtures::row1_scene(), 0);
  const auto r = physics::simulate(s, Action::rotate(ObjectClass::Screwdriver, RotationSense::CCW), 0);
  double worst = 0.0;
  for (const auto& t : r.trajectories)
    for (const auto& smp : t.samples) worst = std::max(worst, orthonormality_error(smp.pose.rotation));
  CHECK(worst < 1e-5);
}

TEST_CASE("settle is idempotent") {
  const Scene once = physics::settle(fixtures::row1_scene(), 0);
  const Scene twice = physics::settle(once, 0);
  for (std::size_t i = 0; i < once.objects.size(); ++i)
    CHECK((once.objects[i].pose.translation - twice.objects[i].pose.translation).norm() < 1e-3);
}

TEST_CASE("mechanical energy never increases across a step") {
  struct Case {
    const char* name;
    Scene scene;
    Action action;
  };
  const Case cases[] = {
      {"drop", fixtures::row1_scene(), Action::drop(ObjectClass::Screwdriver, ObjectClass::FoamBrick)},
      {"push", fixtures::row1_scene(), Action::push(ObjectClass::Screwdriver, 0.0)},
      {"rotate", fixtures::row1_scene(), Action::rotate(ObjectClass::Screwdriver, RotationSense::CW)},
      {"push ball", fixtures::isolated_scene(), Action::push(ObjectClass::Softball, M_PI / 4)},
  };
  for (const auto& c : cases) {
    CAPTURE(std::string(c.name));
    const Scene s = physics::settle(c.scene, 0);
    World rest(s.table, physics::make_bodies(s), {});
    rest.sleep_supported();
    World world(s.table, physics::apply_action(rest.bodies(), c.action), {});
    double worst = 0.0;
    double deepest = 0.0;
    for (int k = 0; k < kSimulationSteps; ++k) {
      const double before = world.mechanical_energy();
      world.step();
      const double after = world.mechanical_energy();
      worst = std::max(worst, (after - before) / std::abs(before));
      deepest = std::max(deepest, world.max_penetration());
    }
    CHECK(worst <= 1e-6);
    CHECK(deepest <= 2e-3);
  }
}

TEST_CASE("mechanical energy never increases on generated scenes") {
  for (int batch = 0; batch < 3; ++batch) {
    for (const auto& e : datagen::gen_batch(batch, 5)) {
      CAPTURE(e.index);
      World rest(e.scene.table, physics::make_bodies(e.scene), {});
      rest.sleep_supported();
      World world(e.scene.table, physics::apply_action(rest.bodies(), e.action), {});
      double worst = 0.0;
      for (int k = 0; k < kSimulationSteps; ++k) {
        const double before = world.mechanical_energy();
        world.step();
        worst = std::max(worst, (world.mechanical_energy() - before) / std::abs(before));
      }
      CHECK(worst <= 1e-6);
    }
  }
}

TEST_CASE("one simulation stays well under two seconds") {
  const Scene s = physics::settle(fixtures::row1_scene(), 0);
  const auto start = std::chrono::steady_clock::now();
  physics::simulate(s, Action::push(ObjectClass::Screwdriver, 0.0), 0);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(secs < 2.0);
}
