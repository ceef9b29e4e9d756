#include "whatif/pipeline.hpp"

#include "whatif/error.hpp"
#include "whatif/lexicon.hpp"

#include "parallel.hpp"

#include <cstdio>
#include <filesystem>

namespace whatif::pipeline {
namespace {

std::vector<const Trajectory*> non_target(const physics::SimulationResult& r, const Action& a) {
  std::vector<const Trajectory*> out;
  for (const auto& t : r.trajectories)
    if (!t.removed && t.cls != a.target) out.push_back(&t);
  return out;
}

bool present(const Scene& scene, ObjectClass c) { return scene.find(c) != nullptr; }

// The action the (partially substituted) pipeline would simulate, or nothing
// when it cannot produce a runnable one.
std::optional<Action> pipeline_action(const Example& e, const AblationConfig& cfg, const Models& models,
                                      parser::Backend backend) {
  const Action& gt = e.action;
  std::optional<Action> parsed;
  if (backend == parser::Backend::Linear) {
    if (!models.parser) throw DataError("linear backend needs a trained parser model");
    parsed = parser::parse_linear(*models.parser, e.action_text).action;
  } else {
    try {
      parsed = parser::parse_rules(e.action_text, &e.scene).action;
    } catch (const ParseError&) {
    }
  }
  if (!parsed && !(cfg.true_action_type && cfg.true_acted_object && cfg.true_action_params)) return std::nullopt;

  Action a = parsed ? *parsed : gt;
  if (cfg.true_action_type) a.kind = gt.kind;
  if (cfg.true_acted_object) a.target = gt.target;
  if (cfg.true_action_params && a.kind == gt.kind) {
    a.params = gt.params;
  } else if (backend == parser::Backend::Linear) {
    a.params = parser::predict_params(*models.parser, e.action_text, a.kind, a.target);
  } else if (!parsed || a.kind != parsed->kind) {
    return std::nullopt;
  } else {
    a.params = parsed->params;
  }
  if (action_violation(a) || !present(e.scene, a.target)) return std::nullopt;
  if (const auto* d = std::get_if<DropParams>(&a.params); d && !present(e.scene, d->onto)) return std::nullopt;
  return a;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

void save_models(const std::string& dir, const Models& models) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create '" + dir + "': " + ec.message());
  if (models.parser) io::write_file((fs::path(dir) / kParserModelFile).string(), parser::to_json(*models.parser).dump());
  io::write_file((fs::path(dir) / kEffectsModelFile).string(),
                 effects::to_json(models.stats, models.thresholds).dump(2));
}

Models load_models(const std::string& dir) {
  namespace fs = std::filesystem;
  Models m;
  const fs::path pp = fs::path(dir) / kParserModelFile;
  if (fs::exists(pp)) m.parser = parser::linear_model_from_json(io::parse_document(io::read_file(pp.string())));
  const auto [stats, thresholds] =
      effects::effects_model_from_json(io::parse_document(io::read_file((fs::path(dir) / kEffectsModelFile).string())));
  m.stats = stats;
  m.thresholds = thresholds;
  return m;
}

FitReport fit_models(const std::vector<const Example*>& train, const FitOptions& options) {
  if (train.empty()) throw DataError("no training data");
  FitReport report;
  std::vector<std::pair<std::string, Action>> corpus;
  corpus.reserve(train.size());
  for (const Example* e : train) corpus.emplace_back(e->action_text, e->action);
  parser::TrainOptions po = options.parser;
  po.seed = options.seed;
  report.models.parser = parser::train_linear(corpus, po);

  // Two passes keep memory flat: stats first, then summaries under them.
  std::vector<effects::PoseStatsAccumulator> partial(train.size());
  detail::parallel_for(train.size(), options.threads, [&](std::size_t i) {
    const auto r = physics::simulate(train[i]->scene, train[i]->action, options.seed);
    for (const Trajectory* t : non_target(r, train[i]->action)) partial[i].add(*t);
  });
  effects::PoseStatsAccumulator acc;
  for (const auto& p : partial) acc.merge(p);
  report.models.stats = acc.finish();

  std::vector<std::vector<effects::LabeledSummary>> labeled(train.size());
  detail::parallel_for(train.size(), options.threads, [&](std::size_t i) {
    const Example& e = *train[i];
    const auto r = physics::simulate(e.scene, e.action, options.seed);
    for (const Trajectory* t : non_target(r, e.action)) {
      const auto it = e.affected_labels.find(t->cls);
      if (it == e.affected_labels.end()) throw DataError("example without affected label: " + std::string(class_id(t->cls)));
      labeled[i].push_back({effects::summarize(*t, report.models.stats), it->second});
    }
  });
  std::vector<effects::LabeledSummary> all;
  for (auto& l : labeled) all.insert(all.end(), l.begin(), l.end());
  report.grid = effects::grid_search(all);
  report.models.thresholds = report.grid.thresholds;
  return report;
}

WhatIfAnswer answer_whatif(const Scene& scene, std::string_view action_text, const Models& models,
                           parser::Backend backend, std::uint64_t seed) {
  WhatIfAnswer out;
  try {
    if (backend == parser::Backend::Linear) {
      if (!models.parser) throw DataError("linear backend needs a trained parser model");
      if (parser::count_vector(models.parser->vocab, action_text).empty()) throw ParseError("unparseable action");
      out.parse = parser::parse_linear(*models.parser, action_text);
    } else {
      out.parse = parser::parse_rules(action_text, &scene);
    }
    const Action& a = out.parse.action;
    if (!present(scene, a.target)) throw ParseError("object not in scene: " + std::string(class_id(a.target)));
    if (const auto* d = std::get_if<DropParams>(&a.params); d && !present(scene, d->onto))
      throw ParseError("object not in scene: " + std::string(class_id(d->onto)));
  } catch (const std::exception& e) {
    throw StageError("parse", e.what());
  }
  try {
    out.simulation = physics::simulate(scene, out.parse.action, seed);
  } catch (const std::exception& e) {
    throw StageError("simulate", e.what());
  }
  try {
    out.descriptions = describer::describe_all(out.simulation, out.parse.action, models.stats, models.thresholds,
                                               scene.table);
  } catch (const std::exception& e) {
    throw StageError("describe", e.what());
  }
  return out;
}

std::map<ObjectClass, std::string> predict_descriptions(const Example& e, const AblationConfig& cfg,
                                                        const Models& models, parser::Backend backend) {
  std::map<ObjectClass, std::string> out;
  for (const auto& [cls, ref] : e.gt_descriptions) out[cls] = "";
  const auto action = pipeline_action(e, cfg, models, backend);
  if (!action) return out;

  const auto result = physics::simulate(e.scene, cfg.true_trajectories ? e.action : *action, 0);
  const describer::AffectedFn affected = cfg.true_affected ? describer::by_labels(e.affected_labels)
                                                           : describer::by_thresholds(models.stats, models.thresholds);
  for (auto& [cls, text] : out) {
    if (cls == action->target) continue;
    const Trajectory* t = result.find(cls);
    if (!t || t->removed) continue;
    text = describer::realize(describer::extract_event(cls, result, *action, affected, e.scene.table));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> prediction_pairs(const std::vector<const Example*>& test,
                                                                  const AblationConfig& config, const Models& models,
                                                                  parser::Backend backend, unsigned threads) {
  std::vector<std::map<ObjectClass, std::string>> predicted(test.size());
  detail::parallel_for(test.size(), threads,
                       [&](std::size_t i) { predicted[i] = predict_descriptions(*test[i], config, models, backend); });
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t i = 0; i < test.size(); ++i)
    for (const auto& [cls, ref] : test[i]->gt_descriptions) pairs.emplace_back(predicted[i].at(cls), ref);
  return pairs;
}

metrics::EvalReport run_eval(const std::vector<const Example*>& test, const AblationConfig& config,
                             const Models& models, parser::Backend backend, unsigned threads) {
  return metrics::evaluate_corpus(prediction_pairs(test, config, models, backend, threads));
}

std::array<std::pair<std::string, AblationConfig>, 6> sweep_configs() {
  return {{{"All Predictions", {false, false, false, false, false}},
           {"With True Action Type", {true, false, false, false, false}},
           {"...and True Acted Object", {true, true, false, false, false}},
           {"...and True Action Parameters", {true, true, true, false, false}},
           {"...and True Trajectories", {true, true, true, true, false}},
           {"...and True Object Acted On", {true, true, true, true, true}}}};
}

std::vector<SweepRow> run_sweep(const std::vector<const Example*>& test, const Models& models,
                                parser::Backend backend, unsigned threads) {
  std::vector<SweepRow> rows;
  for (const auto& [name, cfg] : sweep_configs())
    rows.push_back({name, cfg, run_eval(test, cfg, models, backend, threads)});
  return rows;
}

std::string sweep_table(const std::vector<SweepRow>& rows) {
  std::string out = "Model\tBLEU\tROUGE\tCOM\n";
  for (const auto& r : rows)
    out += r.name + "\t" + fixed(r.report.bleu) + "\t" + fixed(r.report.rouge_l) + "\t" + fixed(r.report.com) + "\n";
  return out;
}

std::vector<HeadAccuracy> component_eval(const std::vector<const Example*>& test, const parser::LinearModel& model) {
  enum { Type, Object, Push, Sense, Onto, NHeads };
  std::array<HeadAccuracy, NHeads> rows{{{"action_type"}, {"acted_object"}, {"push_direction"}, {"rotate_sense"},
                                         {"drop_onto"}}};
  std::array<std::size_t, NHeads> rules_ok{}, linear_ok{};
  auto push_bucket = [](const ActionParams& p) {
    return lexicon::direction_bucket(std::get<PushParams>(p).direction_angle);
  };
  for (const Example* ex : test) {
    const Action& gt = ex->action;
    std::optional<Action> rules;
    try {
      rules = parser::parse_rules(ex->action_text, &ex->scene).action;
    } catch (const ParseError&) {
    }
    const Action lin = parser::parse_linear(model, ex->action_text).action;
    const ActionParams lin_params = parser::predict_params(model, ex->action_text, gt.kind, gt.target);

    ++rows[Type].n;
    ++rows[Object].n;
    rules_ok[Type] += rules && rules->kind == gt.kind;
    rules_ok[Object] += rules && rules->target == gt.target;
    linear_ok[Type] += lin.kind == gt.kind;
    linear_ok[Object] += lin.target == gt.target;

    const bool rules_kind = rules && rules->kind == gt.kind;
    switch (gt.kind) {
      case ActionKind::Push:
        ++rows[Push].n;
        rules_ok[Push] += rules_kind && push_bucket(rules->params) == push_bucket(gt.params);
        linear_ok[Push] += push_bucket(lin_params) == push_bucket(gt.params);
        break;
      case ActionKind::Rotate:
        ++rows[Sense].n;
        rules_ok[Sense] += rules_kind && rules->params == gt.params;
        linear_ok[Sense] += lin_params == gt.params;
        break;
      case ActionKind::Drop:
        ++rows[Onto].n;
        rules_ok[Onto] += rules_kind && rules->params == gt.params;
        linear_ok[Onto] += lin_params == gt.params;
        break;
      case ActionKind::Remove: break;
    }
  }
  std::vector<HeadAccuracy> out;
  for (int h = 0; h < NHeads; ++h) {
    if (rows[h].n == 0) continue;
    rows[h].rules = static_cast<double>(rules_ok[h]) / static_cast<double>(rows[h].n);
    rows[h].linear = static_cast<double>(linear_ok[h]) / static_cast<double>(rows[h].n);
    out.push_back(rows[h]);
  }
  return out;
}

std::string component_table(const std::vector<HeadAccuracy>& rows) {
  std::string out = "Head\tN\tRules\tLinear\n";
  for (const auto& r : rows)
    out += r.head + "\t" + std::to_string(r.n) + "\t" + fixed(r.rules) + "\t" + fixed(r.linear) + "\n";
  return out;
}

}  // namespace whatif::pipeline
