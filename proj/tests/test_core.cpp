#include "doctest.h"
#include "fixtures.hpp"

#include "whatif/error.hpp"
#include "whatif/lexicon.hpp"
#include "whatif/serialization.hpp"
#include "whatif/text.hpp"

#include <cmath>
#include <random>

using namespace whatif;

namespace {

Scene random_scene(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.3, 0.3), yaw(-M_PI, M_PI);
  Scene s;
  s.id = "random-" + std::to_string(rng());
  const double xs[] = {-0.35, -0.15, 0.05, 0.25, 0.4};
  int i = 0;
  for (ObjectClass c : {ObjectClass::FoamBrick, ObjectClass::Banana, ObjectClass::Softball, ObjectClass::CoffeeCan,
                        ObjectClass::Screwdriver}) {
    auto o = fixtures::resting(c, xs[i++], u(rng), yaw(rng));
    o.pose.translation.z() += 1e-3 * std::abs(u(rng));
    s.objects.push_back(o);
  }
  return s;
}

}  // namespace

TEST_CASE("validate_scene accepts a separated scene with distinct classes") {
  CHECK(validate_scene(fixtures::isolated_scene()).empty());
}

TEST_CASE("validate_scene reports a duplicate class") {
  Scene s = fixtures::isolated_scene();
  s.objects[1] = fixtures::resting(ObjectClass::FoamBrick, 0.3, -0.3);
  const auto v = validate_scene(s);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("duplicate class") != std::string::npos);
  CHECK(v[0].find("foam_brick") != std::string::npos);
}

TEST_CASE("validate_scene reports two boxes sharing a center") {
  Scene s = fixtures::isolated_scene();
  s.objects[1] = fixtures::resting(ObjectClass::CheezitBox, -0.3, -0.3);
  s.objects[0] = fixtures::resting(ObjectClass::FoamBrick, -0.3, -0.3);
  const auto v = validate_scene(s);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("interpenetration") != std::string::npos);
}

TEST_CASE("validate_scene reports wrong object count and objects below the table") {
  Scene s = fixtures::isolated_scene();
  s.objects.pop_back();
  CHECK(!validate_scene(s).empty());
  s = fixtures::isolated_scene();
  s.objects[2].pose.translation.z() = -0.1;
  CHECK(!validate_scene(s).empty());
}

TEST_CASE("angle_from_xy") {
  CHECK(angle_from_xy(1, 0) == 0.0);
  CHECK(angle_from_xy(0, 1) == doctest::Approx(M_PI / 2).epsilon(1e-15));
  CHECK(angle_from_xy(-0.5, -0.5) == doctest::Approx(-3 * M_PI / 4).epsilon(1e-15));
  CHECK(angle_from_xy(-1, 0) == doctest::Approx(M_PI).epsilon(1e-15));
  CHECK_THROWS_WITH_AS(angle_from_xy(0, 0), "degenerate push direction", DataError);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1), k(1e-3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng), y = u(rng), s = k(rng);
    CHECK(angle_from_xy(s * x, s * y) == doctest::Approx(angle_from_xy(x, y)).epsilon(1e-12));
  }
}

TEST_CASE("action invariants") {
  CHECK(!action_violation(Action::drop(ObjectClass::Banana, ObjectClass::Softball)));
  CHECK(action_violation(Action::drop(ObjectClass::Banana, ObjectClass::Banana)));
  CHECK(action_violation(Action::push(ObjectClass::Banana, 4.0)));
  CHECK(!action_violation(Action::push(ObjectClass::Banana, -M_PI)));
}

TEST_CASE("lexicon: eight classes with display names and synonyms") {
  CHECK(kAllClasses.size() == 8);
  for (ObjectClass c : kAllClasses) {
    CHECK(class_from_id(class_id(c)) == c);
    REQUIRE(!lexicon::synonyms(c).empty());
    CHECK(lexicon::synonyms(c)[0] == lexicon::display_name(c));
  }
  const auto find = [](std::string_view s) {
    const auto tokens = text::words(s);
    const auto m = lexicon::find_mentions(tokens);
    return m.size() == 1 ? std::optional(m[0].cls) : std::nullopt;
  };
  CHECK(find("cheese box") == ObjectClass::CheezitBox);
  CHECK(find("baseball") == ObjectClass::Softball);
  CHECK(find("mustard container") == ObjectClass::MustardBottle);
  CHECK(find("screw driver") == ObjectClass::Screwdriver);
}

TEST_CASE("direction buckets") {
  CHECK(lexicon::direction_bucket(3 * M_PI / 4) == 3);
  CHECK(lexicon::bucket_name(lexicon::direction_bucket(3 * M_PI / 4)) == "north-west");
  CHECK(lexicon::direction_bucket(M_PI) == 4);
  CHECK(lexicon::direction_bucket(-M_PI) == 4);
  CHECK(lexicon::direction_bucket(-M_PI / 2) == 6);
  // Boundaries at odd multiples of pi/8.
  CHECK(lexicon::direction_bucket(M_PI / 8 - 1e-9) == 0);
  CHECK(lexicon::direction_bucket(M_PI / 8 + 1e-9) == 1);
  for (int b = 0; b < 8; ++b) CHECK(lexicon::direction_bucket(lexicon::bucket_angle(b)) == b);
}

TEST_CASE("tokenize") {
  CHECK(text::tokenize("The robot pushes the mustard container to the left") ==
        std::vector<std::string>{"the", "robot", "pushes", "the", "mustard", "container", "to", "the", "left"});
  const auto t = text::tokenize("the robot spins the screw driver in anti-clockwise direction.");
  CHECK(std::find(t.begin(), t.end(), "anti-clockwise") != t.end());
  CHECK(t.back() == "direction");
  CHECK(text::tokenize("to the north-west!")[2] == "north-west");
  CHECK_THROWS_WITH_AS(text::tokenize(""), "empty description", ParseError);
  CHECK_THROWS_WITH_AS(text::tokenize("   \t "), "empty description", ParseError);
  CHECK(text::words("  ").empty());
}

TEST_CASE("scene round trip is bit exact") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const Scene s = random_scene(rng);
    const Scene back = io::decode_scene(io::encode(s));
    CHECK(back == s);
  }
}

TEST_CASE("action round trip") {
  for (const Action& a : {Action::push(ObjectClass::Banana, 0.1 + M_PI / 3), Action::rotate(ObjectClass::Softball, RotationSense::CCW),
                          Action::remove(ObjectClass::CoffeeCan), Action::drop(ObjectClass::Screwdriver, ObjectClass::FoamBrick)})
    CHECK(io::decode_action(io::encode(a)) == a);
}

TEST_CASE("trajectory with 1500 samples round trips") {
  Trajectory t{ObjectClass::Banana, {}, false};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < kSimulationSteps; ++i) {
    Pose p;
    p.translation = Vec3(u(rng), u(rng), u(rng));
    p.rotation = Eigen::AngleAxisd(u(rng) * M_PI, Vec3(u(rng), u(rng), 1.0).normalized()).toRotationMatrix();
    t.samples.push_back({(i + 1) * kTimeStep, p});
  }
  const Trajectory back = io::decode_trajectory(io::encode(t));
  CHECK(back.samples.size() == 1500);
  CHECK(back == t);
}

TEST_CASE("example round trip") {
  Example e;
  e.scene = fixtures::row1_scene();
  e.action = Action::drop(ObjectClass::Screwdriver, ObjectClass::FoamBrick);
  e.action_text = "the robot drops the screw driver on the foam";
  e.gt_descriptions = {{ObjectClass::FoamBrick, "the foam is pushed by the screw driver"},
                       {ObjectClass::MustardBottle, "nothing"}};
  e.affected_labels = {{ObjectClass::FoamBrick, true}, {ObjectClass::MustardBottle, false}};
  e.batch = 3;
  e.index = 17;
  CHECK(io::decode_example(io::encode(e)) == e);
}

TEST_CASE("schema errors name the offending path") {
  const std::string no_objects = R"({"id":"x","table":{"half_extents":[0.5,0.5,0.375]}})";
  try {
    io::decode_scene(no_objects);
    FAIL("expected a schema error");
  } catch (const SchemaError& e) {
    CHECK(e.path() == ".objects");
  }
  Scene s = fixtures::isolated_scene();
  auto j = io::to_json(s);
  j["objects"][2]["pose"]["r"] = {1, 0, 0, 0, 1, 0, 0, 0};
  try {
    io::scene_from_json(j);
    FAIL("expected a schema error");
  } catch (const SchemaError& e) {
    CHECK(e.path() == ".objects[2].pose.r");
  }
  j = io::to_json(s);
  j["objects"][0]["pose"]["r"] = {2, 0, 0, 0, 1, 0, 0, 0, 1};
  CHECK_THROWS_AS(io::scene_from_json(j), SchemaError);
  CHECK_THROWS_AS(io::decode_scene("{not json"), SchemaError);
}
