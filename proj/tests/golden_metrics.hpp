#pragma once

// Reference metric values for ten (prediction, reference) pairs, produced by
// tests/oracles/metrics_golden.py.

#include <array>

namespace whatif::golden {

struct MetricPair {
  const char* prediction;
  const char* reference;
  std::array<double, 7> expected;  // bleu1..4, bleu, rouge_l, com
};

inline const MetricPair kMetricPairs[] = {
    {"the foam is pushed by the screw driver", "the foam is pushed a little by the screw driver",
     {1.0, 0.8571428571428571, 0.6666666666666666, 0.4, 0.5384952356064083, 0.8714285714285713, 1.0}},
    {"the the the the", "the foam is pushed", {0.25, 0.0, 0.0, 0.0, 0.0, 0.25, 0.0}},
    {"the mustard container is pushed by the screw driver", "the screw driver pushes the mustard container",
     {0.6666666666666666, 0.5, 0.2857142857142857, 0.0, 0.0, 0.38364779874213834, 1.0}},
    {"the banana falls off the table", "the banana falls off the table", {1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0}},
    {"the chocolate box shakes a little from the impact", "the pudding box shakes a little from the impact",
     {0.8888888888888888, 0.75, 0.7142857142857143, 0.6666666666666666, 0.7506238537503395, 0.8888888888888888, 1.0}},
    {"the coffee can is pushed by the baseball", "the softball pushes the coffee can a little",
     {0.5, 0.2857142857142857, 0.16666666666666666, 0.0, 0.0, 0.375, 1.0}},
    {"the cheese box falls off the table", "the foam is pushed by the cheese box",
     {0.5714285714285714, 0.3333333333333333, 0.2, 0.0, 0.0, 0.3952483801295896, 0.5}},
    {"a b c d", "a c d e", {0.75, 0.3333333333333333, 0.0, 0.0, 0.0, 0.75, 1.0}},
    {"the screw driver is pushed by the screw driver", "the foam is pushed by the screw driver",
     {0.7777777777777778, 0.625, 0.5714285714285714, 0.5, 0.6104735835807844, 0.8323586744639376, 0.5}},
    {"the foam brick is pushed a little by the mustard bottle", "the mustard bottle shakes a little from the impact",
     {0.5454545454545454, 0.3, 0.1111111111111111, 0.0, 0.0, 0.4073455759599332, 0.5}},
};


}  // namespace whatif::golden
