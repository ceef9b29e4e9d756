#pragma once

// Action-description parsing: a rule grammar over the shared lexicon and a
// word-count linear classifier.

#include "whatif/types.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace whatif::parser {

enum class Backend { Rules, Linear };

std::string_view backend_id(Backend b);
std::optional<Backend> backend_from_id(std::string_view id);

/// Head names used in ParseOutcome::confidences and in the model file.
inline constexpr std::string_view kActionTypeHead = "action_type";
inline constexpr std::string_view kObjectHead = "object";
inline constexpr std::string_view kSenseHead = "sense";
inline constexpr std::string_view kOntoHead = "onto";
inline constexpr std::string_view kPushHead = "push";

struct ParseOutcome {
  Action action;
  // Classification heads hold one probability per class (sums to 1). The push
  // head holds a single confidence, the length of the squashed (x, y) output
  // clipped to 1.
  std::map<std::string, std::vector<double>, std::less<>> confidences;
  Backend backend;
};

/// Rule grammar. `scene` resolves "middle of the table"; without it that
/// phrase is a ParseError. Errors: "unparseable action", "unknown target",
/// "missing push direction", "missing rotation sense", "missing drop target".
ParseOutcome parse_rules(std::string_view text, const Scene* scene = nullptr);

/// Bag-of-words features. Every token counts once under its own name; tokens
/// after "on"/"onto" also count under "on:<token>" so the drop target is
/// distinguishable from the dropped object.
std::vector<std::string> features(const std::vector<std::string>& tokens);

struct Vocabulary {
  std::vector<std::string> words;  // sorted
  std::optional<std::size_t> index(std::string_view w) const;
  std::size_t size() const { return words.size(); }
};

/// Sparse count vector over a frozen vocabulary; out-of-vocabulary features
/// are dropped.
using CountVector = std::map<std::size_t, double>;
CountVector count_vector(const Vocabulary& vocab, std::string_view text);

struct LinearHead {
  std::vector<std::string> classes;       // class ids, in class-index order
  std::vector<std::vector<double>> w;     // classes x vocabulary
  std::vector<double> b;                  // per class
  std::vector<double> scores(const CountVector& x) const;
  /// Argmax, ties to the lowest index; `exclude` masks one class.
  std::size_t predict(const CountVector& x, std::optional<std::size_t> exclude = std::nullopt) const;
};

struct LinearModel {
  Vocabulary vocab;
  bool use_bias = true;
  LinearHead action_type;  // 4 classes
  LinearHead object;       // 8 classes
  LinearHead sense;        // cw, ccw
  LinearHead onto;         // 8 classes
  // Push regression: two rows (x, y) over the vocabulary plus bias, squashed by tanh.
  std::vector<std::vector<double>> push_w;
  std::vector<double> push_b;

  bool operator==(const LinearModel&) const;
};

struct TrainOptions {
  std::uint64_t seed = 0;
  int epochs = 20;
  bool use_bias = true;
  double ridge = 1e-2;
};

/// Averaged perceptron per classification head and ridge regression for the
/// push head. Deterministic in (corpus order, seed). Throws DataError
/// "insufficient class coverage: <id>" when a kind or class never appears as
/// the acted object.
LinearModel train_linear(const std::vector<std::pair<std::string, Action>>& corpus, const TrainOptions& options = {});

/// Action type head first, then the object head, then only the parameter
/// head of the inferred kind (or of `forced_kind` when given). A drop onto
/// the acted object is never predicted.
ParseOutcome parse_linear(const LinearModel& model, std::string_view text,
                          std::optional<ActionKind> forced_kind = std::nullopt);

/// Parameters for a given kind and target, used by ablations that substitute
/// the kind or target.
ActionParams predict_params(const LinearModel& model, std::string_view text, ActionKind kind, ObjectClass target);

nlohmann::json to_json(const LinearModel& model);
LinearModel linear_model_from_json(const nlohmann::json& j, const std::string& path = "");

}  // namespace whatif::parser
