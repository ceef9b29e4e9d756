#include "doctest.h"
#include "fixtures.hpp"
#include "generators.hpp"

#include "whatif/datagen.hpp"
#include "whatif/error.hpp"
#include "whatif/lexicon.hpp"
#include "whatif/parser.hpp"
#include "whatif/text.hpp"

#include <numeric>
#include <random>

using namespace whatif;
using parser::parse_linear;
using parser::parse_rules;
using generators::random_action;

namespace {

std::vector<std::pair<std::string, Action>> generated_corpus(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<std::string, Action>> corpus;
  while (corpus.size() < n) {
    const Action a = random_action(rng);
    corpus.emplace_back(datagen::gen_action_text(a, rng()), a);
  }
  return corpus;
}

const parser::LinearModel& trained_model() {
  static const parser::LinearModel m = parser::train_linear(generated_corpus(2000, 1));
  return m;
}

double wrap(double a) { return std::remainder(a, 2 * M_PI); }

}  // namespace

TEST_CASE("rules: table example sentences") {
  CHECK(parse_rules("the robot drops the screw driver on the foam").action ==
        Action::drop(ObjectClass::Screwdriver, ObjectClass::FoamBrick));
  CHECK(parse_rules("the robot spins the screw driver in anti-clockwise direction").action ==
        Action::rotate(ObjectClass::Screwdriver, RotationSense::CCW));
  const auto o = parse_rules("the robot rolls the baseball to the north-west side of the table and it drops off");
  CHECK(o.action.kind == ActionKind::Push);
  CHECK(o.action.target == ObjectClass::Softball);
  CHECK(std::get<PushParams>(o.action.params).direction_angle == doctest::Approx(3 * M_PI / 4).epsilon(1e-12));
  const auto left = parse_rules("The robot pushes the mustard container to the left");
  CHECK(left.action == Action::push(ObjectClass::MustardBottle, M_PI));
  CHECK(left.backend == parser::Backend::Rules);
}

TEST_CASE("rules: compass words") {
  const auto angle = [](const char* text) {
    return std::get<PushParams>(parse_rules(text).action.params).direction_angle;
  };
  CHECK(angle("the robot pushes the banana to the right") == 0.0);
  CHECK(angle("the robot shoves the banana up") == doctest::Approx(M_PI / 2));
  CHECK(angle("the robot pushes the banana towards the south of the table") == doctest::Approx(-M_PI / 2));
  CHECK(angle("the robot pushes the banana to the south-east") == doctest::Approx(-M_PI / 4));
  CHECK(parse_rules("the robot turns the ball clockwise").action == Action::rotate(ObjectClass::Softball, RotationSense::CW));
  CHECK(parse_rules("the robot takes the coffee can away").action == Action::remove(ObjectClass::CoffeeCan));
}

TEST_CASE("rules: middle of the table points from the object to the center") {
  const Scene s = fixtures::isolated_scene();
  CHECK_THROWS_WITH_AS(parse_rules("the robot pushes the baseball to the middle of the table", &s),
                       "object already at the middle of the table", ParseError);
  const auto f = parse_rules("the robot pushes the foam to the middle of the table", &s);
  CHECK(std::get<PushParams>(f.action.params).direction_angle == doctest::Approx(M_PI / 4).epsilon(1e-9));
  CHECK_THROWS_AS(parse_rules("the robot pushes the foam to the middle of the table"), ParseError);
}

TEST_CASE("rules: errors") {
  CHECK_THROWS_WITH_AS(parse_rules("gibberish words"), "unparseable action", ParseError);
  CHECK_THROWS_WITH_AS(parse_rules("the robot pushes the table to the left"), "unknown target", ParseError);
  CHECK_THROWS_WITH_AS(parse_rules("the robot pushes the banana"), "missing push direction", ParseError);
  CHECK_THROWS_WITH_AS(parse_rules("the robot spins the banana"), "missing rotation sense", ParseError);
  CHECK_THROWS_WITH_AS(parse_rules("the robot drops the banana"), "missing drop target", ParseError);
  CHECK_THROWS_WITH_AS(parse_rules("   "), "empty description", ParseError);
}

TEST_CASE("rules: confidences are one-hot on matched heads") {
  const auto o = parse_rules("the robot drops the screw driver on the foam");
  for (const auto& [head, p] : o.confidences) {
    CAPTURE(head);
    CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0));
  }
  CHECK(o.confidences.at(std::string(parser::kOntoHead))[class_index(ObjectClass::FoamBrick)] == 1.0);
}

TEST_CASE("rules: parse_rules inverts gen_action_text on 1000 generated sentences") {
  std::mt19937_64 rng(2024);
  int exact = 0;
  for (int i = 0; i < 1000; ++i) {
    const Action a = random_action(rng);
    const std::string text = datagen::gen_action_text(a, rng());
    CAPTURE(text);
    const Action back = parse_rules(text).action;
    CHECK(back == a);
    exact += back == a;
    CHECK(parse_rules(text).action == back);
  }
  CHECK(exact == 1000);
}

TEST_CASE("linear: memorizes a separable toy corpus") {
  std::vector<std::pair<std::string, Action>> corpus;
  const ObjectClass classes[] = {ObjectClass::FoamBrick, ObjectClass::CheezitBox, ObjectClass::PuddingBox,
                                 ObjectClass::MustardBottle, ObjectClass::Banana, ObjectClass::Softball,
                                 ObjectClass::CoffeeCan, ObjectClass::Screwdriver};
  for (int i = 0; i < 8; ++i) {
    const ObjectClass c = classes[i];
    const std::string name(lexicon::display_name(c));
    Action a = Action::remove(c);
    std::string text = "the robot removes the " + name;
    if (i % 4 == 0) {
      a = Action::push(c, i == 0 ? 0.0 : M_PI);
      text = "the robot pushes the " + name + (i == 0 ? " to the right" : " to the left");
    } else if (i % 4 == 1) {
      a = Action::rotate(c, RotationSense::CW);
      text = "the robot spins the " + name + " clockwise";
    } else if (i % 4 == 3) {
      a = Action::drop(c, ObjectClass::Banana);
      text = "the robot drops the " + name + " on the banana";
    }
    corpus.emplace_back(text, a);
  }
  const auto m = parser::train_linear(corpus);
  for (const auto& [text, a] : corpus) {
    CAPTURE(text);
    const Action p = parse_linear(m, text).action;
    CHECK(p.kind == a.kind);
    CHECK(p.target == a.target);
    if (a.kind != ActionKind::Push) CHECK(p == a);
  }
}

TEST_CASE("linear: coverage precondition") {
  auto corpus = generated_corpus(400, 3);
  std::erase_if(corpus, [](const auto& e) { return e.second.kind == ActionKind::Rotate; });
  CHECK_THROWS_WITH_AS(parser::train_linear(corpus), "insufficient class coverage: rotate", DataError);
  corpus = generated_corpus(400, 3);
  std::erase_if(corpus, [](const auto& e) { return e.second.target == ObjectClass::Banana; });
  CHECK_THROWS_WITH_AS(parser::train_linear(corpus), "insufficient class coverage: banana", DataError);
}

TEST_CASE("linear: the mustard container goes left") {
  const auto o = parse_linear(trained_model(), "the robot pushes the mustard container to the left");
  CHECK(o.action.kind == ActionKind::Push);
  CHECK(o.action.target == ObjectClass::MustardBottle);
  CHECK(std::abs(wrap(std::get<PushParams>(o.action.params).direction_angle - M_PI)) < M_PI / 8);
  CHECK(o.backend == parser::Backend::Linear);
}

TEST_CASE("linear: held-out generated sentences") {
  const auto test = generated_corpus(500, 77);
  int kind = 0, target = 0;
  for (const auto& [text, a] : test) {
    const Action p = parse_linear(trained_model(), text).action;
    kind += p.kind == a.kind;
    target += p.target == a.target;
  }
  CHECK(kind / 500.0 >= 0.95);
  CHECK(target / 500.0 >= 0.90);
}

TEST_CASE("linear: zero push output falls back to angle 0 with confidence 0") {
  parser::LinearModel m = trained_model();
  for (auto& row : m.push_w) std::fill(row.begin(), row.end(), 0.0);
  std::fill(m.push_b.begin(), m.push_b.end(), 0.0);
  const auto o = parse_linear(m, "the robot pushes the banana to the left");
  REQUIRE(o.action.kind == ActionKind::Push);
  CHECK(std::get<PushParams>(o.action.params).direction_angle == 0.0);
  CHECK(o.confidences.at(std::string(parser::kPushHead)) == std::vector<double>{0.0});
}

TEST_CASE("linear: classification probabilities sum to 1 and drops never target themselves") {
  std::mt19937_64 rng(8);
  for (const auto& [text, a] : generated_corpus(200, 55)) {
    const auto o = parse_linear(trained_model(), text);
    for (const auto& [head, p] : o.confidences) {
      if (head == parser::kPushHead) {
        CHECK(p[0] >= 0.0);
        CHECK(p[0] <= 1.0);
        continue;
      }
      CAPTURE(head);
      CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    }
    if (const auto* d = std::get_if<DropParams>(&o.action.params)) CHECK(d->onto != o.action.target);
  }
}

TEST_CASE("linear: bias-free heads are argmax invariant under positive scaling") {
  parser::TrainOptions opts;
  opts.use_bias = false;
  const auto m = parser::train_linear(generated_corpus(800, 4), opts);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  for (const auto& [text, a] : generated_corpus(200, 9)) {
    const auto x = parser::count_vector(m.vocab, text);
    auto y = x;
    const double k = scale(rng);
    for (auto& [i, v] : y) v *= k;
    for (const parser::LinearHead* h : {&m.action_type, &m.object, &m.sense, &m.onto}) CHECK(h->predict(x) == h->predict(y));
  }
}

TEST_CASE("linear: training is deterministic and the model round trips") {
  const auto corpus = generated_corpus(300, 21);
  const auto a = parser::train_linear(corpus, {.seed = 5});
  const auto b = parser::train_linear(corpus, {.seed = 5});
  CHECK(a == b);
  const auto back = parser::linear_model_from_json(nlohmann::json::parse(parser::to_json(a).dump()));
  CHECK(back == a);
}

TEST_CASE("features mark tokens after on/onto") {
  const auto f = parser::features(text::tokenize("the robot drops the banana onto the ball"));
  CHECK(std::find(f.begin(), f.end(), "on:ball") != f.end());
  CHECK(std::find(f.begin(), f.end(), "on:banana") == f.end());
  CHECK(std::find(f.begin(), f.end(), "banana") != f.end());
}
