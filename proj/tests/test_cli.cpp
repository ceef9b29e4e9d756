#include "doctest.h"
#include "fixtures.hpp"

#include "cli.hpp"
#include "whatif/serialization.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <sstream>

using namespace whatif;
using Json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("whatif-cli-" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("parse with the rule backend") {
  const auto r = run({"parse", "--backend", "rules", "the robot drops the screw driver on the foam"});
  REQUIRE(r.code == cli::kExitOk);
  const Json j = Json::parse(r.out);
  CHECK(io::action_from_json(j["action"]) == Action::drop(ObjectClass::Screwdriver, ObjectClass::FoamBrick));
  CHECK(j["backend"] == "rules");
}

TEST_CASE("exit codes") {
  const auto usage = run({"parse", "--bogus", "x"});
  CHECK(usage.code == cli::kExitUsage);
  CHECK(Json::parse(usage.err)["error"] == "usage");
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"parse", "--backend", "svm", "x"}).code == cli::kExitUsage);

  const auto data = run({"parse", "gibberish words"});
  CHECK(data.code == cli::kExitData);
  CHECK(Json::parse(data.err)["message"] == "unparseable action");
  CHECK(run({"simulate", "--scene", "/nonexistent/scene.json", "--action", "/nonexistent/a.json"}).code ==
        cli::kExitData);
  CHECK(run({"--help"}).code == cli::kExitOk);
}

TEST_CASE("simulate writes trajectories and contacts") {
  TempDir dir;
  io::write_file(dir / "scene.json", io::encode(fixtures::row1_scene()));
  io::write_file(dir / "action.json", io::encode(Action::drop(ObjectClass::Screwdriver, ObjectClass::FoamBrick)));
  const auto r = run({"simulate", "--scene", dir / "scene.json", "--action", dir / "action.json"});
  REQUIRE(r.code == cli::kExitOk);
  const Json j = Json::parse(r.out);
  CHECK(j["trajectories"].size() == 5);
  CHECK(j["trajectories"][0]["samples"].size() == kSimulationSteps);
  CHECK(!j["contacts"].empty());

  Json bad = io::to_json(fixtures::row1_scene());
  bad["objects"][0]["pose"].erase("t");
  io::write_file(dir / "bad.json", bad.dump());
  const auto e = run({"simulate", "--scene", dir / "bad.json", "--action", dir / "action.json"});
  CHECK(e.code == cli::kExitData);
  CHECK(Json::parse(e.err)["path"] == ".objects[0].pose.t");
}

TEST_CASE("gen-dataset, fit, answer and evaluate") {
  TempDir dir;
  const auto g = run({"gen-dataset", "--batches", "4", "--seed", "3", "--out", dir / "data", "--threads", "1"});
  REQUIRE(g.code == cli::kExitOk);
  CHECK(Json::parse(g.out)["examples"] == 4 * 68);
  CHECK(fs::exists(dir.path / "data" / "manifest.json"));

  CHECK(run({"fit", "--data", dir / "data", "--out", dir / "models"}).code == cli::kExitData);
  const auto f = run({"fit", "--data", dir / "data", "--out", dir / "models", "--min-batches", "4"});
  REQUIRE(f.code == cli::kExitOk);
  CHECK(Json::parse(f.out)["tau_t"] > 0.0);

  io::write_file(dir / "scene.json", io::encode(fixtures::isolated_scene()));
  const auto a = run({"answer", "--models", dir / "models", "--scene", dir / "scene.json", "--backend", "rules",
                      "the robot removes the banana"});
  REQUIRE(a.code == cli::kExitOk);
  CHECK(Json::parse(a.out)["descriptions"].size() == 4);

  const auto e = run({"evaluate", "--models", dir / "models", "--data", dir / "data", "--ablation", "none",
                      "--min-batches", "4", "--backend", "rules"});
  REQUIRE(e.code == cli::kExitOk);
  const Json report = Json::parse(e.out);
  CHECK(report["n"] == 3 * 68 * 4);
  CHECK(report["com"] >= 0.0);
}
