#pragma once

// Parse -> simulate -> describe, model fitting, corpus evaluation and the
// ground-truth substitution ablation.

#include "whatif/describer.hpp"
#include "whatif/effects.hpp"
#include "whatif/metrics.hpp"
#include "whatif/parser.hpp"
#include "whatif/physics.hpp"
#include "whatif/serialization.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace whatif::pipeline {

struct Models {
  std::optional<parser::LinearModel> parser;  // required by the Linear backend only
  effects::PoseStats stats = effects::PoseStats::identity();
  effects::Thresholds thresholds{};
};

inline constexpr const char* kParserModelFile = "parser_model.json";
inline constexpr const char* kEffectsModelFile = "effects_model.json";

/// DIR/parser_model.json (when present) and DIR/effects_model.json.
void save_models(const std::string& dir, const Models& models);
/// The parser file is optional; the effects file is required.
Models load_models(const std::string& dir);

struct FitOptions {
  std::uint64_t seed = 0;
  unsigned threads = 0;
  parser::TrainOptions parser{};
};

struct FitReport {
  Models models;
  effects::GridResult grid;  // threshold accuracy on the training examples
};

/// Trains the linear parser on (action_text, action) pairs, fits pose stats
/// over the non-target trajectories of the re-simulated examples, and
/// grid-searches thresholds against their affected labels.
FitReport fit_models(const std::vector<const Example*>& train, const FitOptions& options = {});

struct WhatIfAnswer {
  parser::ParseOutcome parse;
  physics::SimulationResult simulation;
  std::map<ObjectClass, describer::Description> descriptions;
};

/// Throws StageError tagged "parse", "simulate" or "describe". The parse stage
/// also fails on text with no known word (Linear backend) and on actions that
/// name objects absent from the scene.
WhatIfAnswer answer_whatif(const Scene& scene, std::string_view action_text, const Models& models,
                           parser::Backend backend, std::uint64_t seed = 0);

struct AblationConfig {
  bool true_action_type = false;
  bool true_acted_object = false;
  bool true_action_params = false;
  bool true_trajectories = false;
  bool true_affected = false;
};

/// The pipeline's predicted descriptions for every ground-truth subject of
/// `example`, with the flagged stages replaced by ground truth. A subject the
/// pipeline treats as the acted object gets an empty prediction.
std::map<ObjectClass, std::string> predict_descriptions(const Example& example, const AblationConfig& config,
                                                        const Models& models, parser::Backend backend);

/// (prediction, reference) per ground-truth description, example order then
/// class order.
std::vector<std::pair<std::string, std::string>> prediction_pairs(const std::vector<const Example*>& test,
                                                                  const AblationConfig& config, const Models& models,
                                                                  parser::Backend backend, unsigned threads = 0);

metrics::EvalReport run_eval(const std::vector<const Example*>& test, const AblationConfig& config,
                             const Models& models, parser::Backend backend, unsigned threads = 0);

struct SweepRow {
  std::string name;
  AblationConfig config;
  metrics::EvalReport report;
};

/// The six cumulative configurations, in table order.
std::array<std::pair<std::string, AblationConfig>, 6> sweep_configs();

std::vector<SweepRow> run_sweep(const std::vector<const Example*>& test, const Models& models,
                                parser::Backend backend, unsigned threads = 0);

/// Tab-separated table with columns Model, BLEU, ROUGE, COM.
std::string sweep_table(const std::vector<SweepRow>& rows);

struct HeadAccuracy {
  std::string head;
  std::size_t n = 0;
  double rules = 0.0;
  double linear = 0.0;
};

/// Accuracy per head for both backends. Action type and acted object are
/// scored on every example; the parameter heads on examples of their kind,
/// with the true kind and target given to the linear backend. Push direction
/// is scored after discretizing the angle into the eight compass buckets. A
/// rule parse failure counts as wrong on every head.
std::vector<HeadAccuracy> component_eval(const std::vector<const Example*>& test, const parser::LinearModel& model);

/// Tab-separated table with columns Head, N, Rules, Linear.
std::string component_table(const std::vector<HeadAccuracy>& rows);

}  // namespace whatif::pipeline
