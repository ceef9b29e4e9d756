#include "whatif/metrics.hpp"

#include "whatif/error.hpp"
#include "whatif/lexicon.hpp"
#include "whatif/text.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace whatif::metrics {
namespace {

using Tokens = std::vector<std::string>;
using NGram = std::vector<std::string>;

std::map<NGram, int> ngrams(const Tokens& t, int n) {
  std::map<NGram, int> out;
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= t.size(); ++i)
    ++out[NGram(t.begin() + static_cast<long>(i), t.begin() + static_cast<long>(i) + n)];
  return out;
}

double precision(const Tokens& pred, const Tokens& ref, int n) {
  const auto p = ngrams(pred, n);
  const auto r = ngrams(ref, n);
  if (p.empty()) return r.empty() ? 1.0 : 0.0;
  int total = 0, clipped = 0;
  for (const auto& [g, c] : p) {
    total += c;
    auto it = r.find(g);
    if (it != r.end()) clipped += std::min(c, it->second);
  }
  return static_cast<double>(clipped) / static_cast<double>(total);
}

std::size_t lcs(const Tokens& a, const Tokens& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

std::set<ObjectClass> mentioned_objects(std::string_view text) {
  const Tokens tokens = text::words(text);
  std::set<ObjectClass> out;
  for (const auto& m : lexicon::find_mentions(tokens)) out.insert(m.cls);
  return out;
}

double com(std::string_view prediction, std::string_view reference) {
  const auto a = mentioned_objects(prediction);
  const auto b = mentioned_objects(reference);
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  for (ObjectClass c : a) inter += b.count(c);
  return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

double bleu_n(std::string_view prediction, std::string_view reference, int n) {
  if (n < 1 || n > 4) throw DataError("bleu order must be 1..4");
  return precision(text::words(prediction), text::words(reference), n);
}

double bleu(std::string_view prediction, std::string_view reference) {
  const Tokens p = text::words(prediction), r = text::words(reference);
  if (p.empty()) return r.empty() ? 1.0 : 0.0;
  double log_sum = 0.0;
  for (int n = 1; n <= 4; ++n) {
    const double pn = precision(p, r, n);
    if (pn == 0.0) return 0.0;
    log_sum += std::log(pn);
  }
  const double c = static_cast<double>(p.size()), len_r = static_cast<double>(r.size());
  const double bp = c > len_r ? 1.0 : std::exp(1.0 - len_r / c);
  return bp * std::exp(log_sum / 4.0);
}

double rouge_l(std::string_view prediction, std::string_view reference) {
  const Tokens p = text::words(prediction), r = text::words(reference);
  if (p.empty() && r.empty()) return 1.0;
  const std::size_t l = lcs(p, r);
  if (l == 0) return 0.0;
  const double prec = static_cast<double>(l) / static_cast<double>(p.size());
  const double rec = static_cast<double>(l) / static_cast<double>(r.size());
  const double b2 = kRougeBeta * kRougeBeta;
  return (1.0 + b2) * prec * rec / (rec + b2 * prec);
}

EvalReport evaluate_corpus(const std::vector<std::pair<std::string, std::string>>& pairs) {
  if (pairs.empty()) throw DataError("no examples");
  EvalReport r;
  for (const auto& [pred, ref] : pairs) {
    r.bleu += bleu(pred, ref);
    for (int n = 1; n <= 4; ++n) r.bleu_n[n - 1] += bleu_n(pred, ref, n);
    r.rouge_l += rouge_l(pred, ref);
    r.com += com(pred, ref);
  }
  const double n = static_cast<double>(pairs.size());
  r.bleu /= n;
  for (double& b : r.bleu_n) b /= n;
  r.rouge_l /= n;
  r.com /= n;
  r.n_examples = pairs.size();
  return r;
}

}  // namespace whatif::metrics
