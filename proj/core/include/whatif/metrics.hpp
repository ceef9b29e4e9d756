#pragma once

// Sentence-level caption metrics, macro-averaged over a corpus.

#include "whatif/types.hpp"

#include <array>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace whatif::metrics {

std::set<ObjectClass> mentioned_objects(std::string_view text);

/// Intersection over union of the mentioned object sets; 1 when both are empty.
double com(std::string_view prediction, std::string_view reference);

/// Clipped n-gram precision. A prediction with no n-grams of order n scores 0,
/// unless the reference has none either (then the order agrees vacuously: 1).
double bleu_n(std::string_view prediction, std::string_view reference, int n);

/// Brevity penalty times the geometric mean of the four clipped precisions.
double bleu(std::string_view prediction, std::string_view reference);

inline constexpr double kRougeBeta = 1.2;
double rouge_l(std::string_view prediction, std::string_view reference);

struct EvalReport {
  double bleu = 0.0;
  std::array<double, 4> bleu_n{};
  double rouge_l = 0.0;
  double com = 0.0;
  std::size_t n_examples = 0;
};

/// Arithmetic mean of each metric over (prediction, reference) pairs.
/// Throws DataError("no examples") on an empty list.
EvalReport evaluate_corpus(const std::vector<std::pair<std::string, std::string>>& pairs);

}  // namespace whatif::metrics
