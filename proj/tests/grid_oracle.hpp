#pragma once

// Brute-force threshold search over an independently built candidate set, and
// random labeled fixtures to compare against.

#include "whatif/effects.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

namespace whatif::grid_oracle {

/// Most correct predictions over every pair drawn from: the observed positive
/// values, half the smallest positive value, and a value above every sample.
/// With strict comparison these realize every reachable split.
inline std::size_t best_correct(const std::vector<effects::LabeledSummary>& ex) {
  auto cands = [&](auto get) {
    std::set<double> c;
    double lo = INFINITY, hi = 0.0;
    for (const auto& e : ex) {
      const double v = get(e.summary);
      if (v > 0.0) {
        c.insert(v);
        lo = std::min(lo, v);
      }
      hi = std::max(hi, v);
    }
    if (lo < INFINITY) c.insert(lo / 2);
    c.insert(2 * hi + 1);
    return c;
  };
  const auto ct = cands([](const effects::MotionSummary& s) { return s.sigma_t; });
  const auto cr = cands([](const effects::MotionSummary& s) { return s.sigma_r; });
  std::size_t best = 0;
  for (double a : ct)
    for (double b : cr) {
      std::size_t ok = 0;
      for (const auto& e : ex) ok += effects::is_affected(e.summary, {a, b}) == e.label;
      best = std::max(best, ok);
    }
  return best;
}

/// 2..200 examples on a coarse grid (so values tie), labels from a noisy
/// threshold rule, both labels present. `zeros` allows exact zero spreads.
inline std::vector<effects::LabeledSummary> random_fixture(std::mt19937_64& rng, bool zeros) {
  const int n = std::uniform_int_distribution<int>(2, 200)(rng);
  const int levels = std::uniform_int_distribution<int>(2, 40)(rng);
  std::uniform_int_distribution<int> q(zeros ? 0 : 1, levels);
  std::bernoulli_distribution noise(0.15);
  std::vector<effects::LabeledSummary> ex;
  for (int i = 0; i < n; ++i) {
    const double st = q(rng) * 0.01, sr = q(rng) * 0.02;
    const bool truth = st > 0.1 || sr > 0.3;
    ex.push_back({{st, sr}, truth != noise(rng)});
  }
  const auto pos = std::count_if(ex.begin(), ex.end(), [](const auto& e) { return e.label; });
  if (pos == 0 || pos == n) ex[0].label = !ex[0].label;
  return ex;
}

}  // namespace whatif::grid_oracle
