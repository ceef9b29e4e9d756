#include "cli.hpp"

#include "whatif/datagen.hpp"
#include "whatif/error.hpp"
#include "whatif/pipeline.hpp"
#include "whatif/service.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <iostream>

namespace whatif::cli {
namespace {

using Json = nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json simulation_json(const physics::SimulationResult& r) {
  Json contacts = Json::array();
  for (const auto& c : r.contacts)
    contacts.push_back({{"t", c.t},
                        {"a", class_id(c.a)},
                        {"b", c.b ? Json(class_id(*c.b)) : Json("table")},
                        {"impulse", c.impulse_magnitude}});
  Json trajectories = Json::array();
  for (const auto& t : r.trajectories) trajectories.push_back(io::to_json(t));
  return {{"trajectories", trajectories}, {"contacts", contacts}};
}

Json report_json(const metrics::EvalReport& r) {
  return {{"bleu", r.bleu},       {"bleu_1", r.bleu_n[0]}, {"bleu_2", r.bleu_n[1]}, {"bleu_3", r.bleu_n[2]},
          {"bleu_4", r.bleu_n[3]}, {"rouge_l", r.rouge_l}, {"com", r.com},          {"n", r.n_examples}};
}

parser::Backend backend_of(const std::string& id) {
  const auto b = parser::backend_from_id(id);
  if (!b) throw UsageError("unknown backend '" + id + "'");
  return *b;
}

void emit(std::ostream& out, const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") out << text;
  else io::write_file(path, text);
}

service::Service* active_service = nullptr;

extern "C" void stop_service(int) {
  if (active_service) active_service->stop();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"what-if questions about table-top physics", "whatif"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  unsigned threads = 0;

  int batches = datagen::kMinBatches;
  std::string out_path;
  auto* gen = app.add_subcommand("gen-dataset", "generate a synthetic dataset");
  gen->add_option("--batches", batches, "number of 68-example batches")->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed, "master seed");
  gen->add_option("--out", out_path, "output directory")->required();
  gen->add_option("--threads", threads, "worker threads (0 = all cores)");

  std::string data_dir;
  int min_batches = datagen::kMinBatches;
  auto* fit = app.add_subcommand("fit", "train the parser and the affected-object classifier");
  fit->add_option("--data", data_dir, "dataset directory")->required();
  fit->add_option("--out", out_path, "models directory")->required();
  fit->add_option("--seed", seed, "training seed");
  fit->add_option("--threads", threads, "worker threads (0 = all cores)");
  fit->add_option("--min-batches", min_batches, "smallest dataset accepted by the train/test split");

  std::string models_dir, backend_id = "rules", text, scene_path;
  auto* parse = app.add_subcommand("parse", "parse an action description");
  parse->add_option("--models", models_dir, "models directory (linear backend)");
  parse->add_option("--backend", backend_id, "rules or linear");
  parse->add_option("--scene", scene_path, "scene file, resolves \"middle of the table\"");
  parse->add_option("text", text, "action description")->required();

  std::string action_path;
  auto* simulate = app.add_subcommand("simulate", "simulate an action on a scene");
  simulate->add_option("--scene", scene_path, "scene file")->required();
  simulate->add_option("--action", action_path, "action file")->required();
  simulate->add_option("--seed", seed, "simulation seed");
  simulate->add_option("--out", out_path, "output file (default: standard output)");

  std::string answer_backend;
  auto* answer = app.add_subcommand("answer", "answer a what-if question about a scene");
  answer->add_option("--models", models_dir, "models directory")->required();
  answer->add_option("--scene", scene_path, "scene file")->required();
  answer->add_option("--backend", answer_backend, "rules or linear (default: linear)");
  answer->add_option("--seed", seed, "simulation seed");
  answer->add_option("text", text, "action description")->required();

  std::string ablation = "sweep", components_path;
  auto* evaluate = app.add_subcommand("evaluate", "score the pipeline on the test split");
  evaluate->add_option("--models", models_dir, "models directory")->required();
  evaluate->add_option("--data", data_dir, "dataset directory")->required();
  evaluate->add_option("--ablation", ablation, "sweep or none")->check(CLI::IsMember({"sweep", "none"}));
  evaluate->add_option("--backend", answer_backend, "rules or linear (default: linear)");
  evaluate->add_option("--out", out_path, "output file (default: standard output)");
  evaluate->add_option("--components", components_path, "also write the per-head accuracy table here");
  evaluate->add_option("--threads", threads, "worker threads (0 = all cores)");
  evaluate->add_option("--min-batches", min_batches, "smallest dataset accepted by the train/test split");

  std::string addr = "127.0.0.1:8080", persist_dir;
  auto* serve = app.add_subcommand("serve", "run the HTTP API");
  serve->add_option("--models", models_dir, "models directory")->required();
  serve->add_option("--addr", addr, "HOST:PORT");
  serve->add_option("--persist", persist_dir, "directory for stored scenes");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << Json{{"error", "usage"}, {"message", e.what()}}.dump() << "\n";
    return kExitUsage;
  }

  try {
    if (gen->parsed()) {
      const auto d = datagen::generate(batches, seed, threads);
      datagen::write_dataset(out_path, d);
      std::size_t descriptions = 0;
      for (const auto& e : d.examples) descriptions += e.gt_descriptions.size();
      out << Json{{"out", out_path}, {"batches", d.n_batches}, {"examples", d.examples.size()},
                  {"descriptions", descriptions}}.dump()
          << "\n";
    } else if (fit->parsed()) {
      const auto d = datagen::read_dataset(data_dir);
      const auto s = datagen::split(d, min_batches);
      pipeline::FitOptions fo;
      fo.seed = seed;
      fo.threads = threads;
      const auto report = pipeline::fit_models(s.train, fo);
      pipeline::save_models(out_path, report.models);
      out << Json{{"out", out_path},
                  {"train_examples", s.train.size()},
                  {"tau_t", report.models.thresholds.tau_t},
                  {"tau_r", report.models.thresholds.tau_r},
                  {"threshold_accuracy", report.grid.accuracy()}}.dump()
          << "\n";
    } else if (parse->parsed()) {
      const auto backend = backend_of(backend_id);
      std::optional<Scene> scene;
      if (!scene_path.empty()) scene = io::decode_scene(io::read_file(scene_path));
      parser::ParseOutcome o;
      if (backend == parser::Backend::Linear) {
        if (models_dir.empty()) throw UsageError("--models is required for the linear backend");
        const auto m = pipeline::load_models(models_dir);
        if (!m.parser) throw DataError("models directory has no parser model");
        o = parser::parse_linear(*m.parser, text);
      } else {
        o = parser::parse_rules(text, scene ? &*scene : nullptr);
      }
      out << Json{{"action", io::to_json(o.action)}, {"summary", describe_action(o.action)},
                  {"backend", parser::backend_id(o.backend)}, {"confidences", o.confidences}}.dump()
          << "\n";
    } else if (simulate->parsed()) {
      const Scene scene = io::decode_scene(io::read_file(scene_path));
      const Action action = io::decode_action(io::read_file(action_path));
      emit(out, out_path, simulation_json(physics::simulate(scene, action, seed)).dump() + "\n");
    } else if (answer->parsed()) {
      const auto m = pipeline::load_models(models_dir);
      const Scene scene = io::decode_scene(io::read_file(scene_path));
      const auto backend = answer_backend.empty() ? (m.parser ? parser::Backend::Linear : parser::Backend::Rules)
                                                  : backend_of(answer_backend);
      out << service::answer_json(pipeline::answer_whatif(scene, text, m, backend, seed)).dump() << "\n";
    } else if (evaluate->parsed()) {
      const auto m = pipeline::load_models(models_dir);
      const auto d = datagen::read_dataset(data_dir);
      const auto s = datagen::split(d, min_batches);
      const auto backend = answer_backend.empty() ? (m.parser ? parser::Backend::Linear : parser::Backend::Rules)
                                                  : backend_of(answer_backend);
      if (ablation == "sweep") {
        emit(out, out_path, pipeline::sweep_table(pipeline::run_sweep(s.test, m, backend, threads)));
      } else {
        emit(out, out_path, report_json(pipeline::run_eval(s.test, {}, m, backend, threads)).dump() + "\n");
      }
      if (!components_path.empty()) {
        if (!m.parser) throw DataError("models directory has no parser model");
        io::write_file(components_path, pipeline::component_table(pipeline::component_eval(s.test, *m.parser)));
      }
    } else if (serve->parsed()) {
      const auto colon = addr.rfind(':');
      if (colon == std::string::npos) throw UsageError("--addr must be HOST:PORT");
      int port = 0;
      try {
        port = std::stoi(addr.substr(colon + 1));
      } catch (const std::exception&) {
        throw UsageError("--addr must be HOST:PORT");
      }
      service::Options so;
      so.persist_dir = persist_dir;
      service::Service svc(pipeline::load_models(models_dir), so);
      active_service = &svc;
      std::signal(SIGINT, stop_service);
      std::signal(SIGTERM, stop_service);
      err << Json{{"listening", addr}}.dump() << "\n";
      const bool ok = svc.listen(addr.substr(0, colon), port);
      active_service = nullptr;
      if (!ok) throw DataError("cannot listen on " + addr);
    }
  } catch (const UsageError& e) {
    err << Json{{"error", "usage"}, {"message", e.what()}}.dump() << "\n";
    return kExitUsage;
  } catch (const StageError& e) {
    err << Json{{"error", "data"}, {"stage", e.stage()}, {"message", e.what()}}.dump() << "\n";
    return kExitData;
  } catch (const SchemaError& e) {
    err << Json{{"error", "data"}, {"path", e.path()}, {"message", e.what()}}.dump() << "\n";
    return kExitData;
  } catch (const DataError& e) {
    err << Json{{"error", "data"}, {"message", e.what()}}.dump() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << Json{{"error", "internal"}, {"message", e.what()}}.dump() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace whatif::cli
