#pragma once

// Synthetic what-if dataset: random settled scenes, sampled actions,
// grammar-generated action descriptions and simulator-derived outcomes.

#include "whatif/serialization.hpp"
#include "whatif/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace whatif::datagen {

inline constexpr int kExamplesPerKind = 17;
inline constexpr int kExamplesPerBatch = kExamplesPerKind * kNumActionKinds;  // 68
inline constexpr int kTestBatches = 3;
inline constexpr int kMinBatches = 15;
inline constexpr double kPlacementHalfWidth = 0.4;  // centers within the inner 0.8 x 0.8 m
inline constexpr int kMaxRejections = 1000;

/// SplitMix64 mix of (seed, a, b); independent streams per (batch, index, use).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

/// Five distinct classes at random non-overlapping poses with random yaw,
/// resting on the table and settled. Throws DataError("cannot place scene")
/// after kMaxRejections failed placements.
Scene sample_scene(std::uint64_t seed);

/// Uniform target; push direction uniform over the eight compass angles;
/// uniform rotation sense; uniform drop target other than the acted object.
Action sample_action(const Scene& scene, ActionKind kind, std::uint64_t seed);

/// One of several surface templates with synonym variation; always parses
/// back to `action` under the rule parser.
std::string gen_action_text(const Action& action, std::uint64_t seed);

/// Builds, simulates and describes one example.
Example make_example(int batch, int index, ActionKind kind, std::uint64_t batch_seed);

/// Seed of batch `batch` under a master seed.
std::uint64_t batch_seed(std::uint64_t master_seed, int batch);

/// 68 examples, 17 of each action kind in kind order.
std::vector<Example> gen_batch(int batch_index, std::uint64_t master_seed);

struct Dataset {
  std::uint64_t master_seed = 0;
  int n_batches = 0;
  std::vector<Example> examples;  // batch-major
};

/// Generates `n_batches` batches, in parallel over `threads` workers (0 = all
/// hardware threads). The result does not depend on the thread count.
Dataset generate(int n_batches, std::uint64_t master_seed, unsigned threads = 0);

struct Split {
  std::vector<const Example*> train;
  std::vector<const Example*> test;
};

/// The last three batches are the test split. Throws DataError when the
/// dataset has fewer than `min_batches` batches.
Split split(const Dataset& dataset, int min_batches = kMinBatches);

/// DIR/manifest.json plus DIR/bBB_eEEE.json per example.
void write_dataset(const std::string& dir, const Dataset& dataset);
Dataset read_dataset(const std::string& dir);

}  // namespace whatif::datagen
