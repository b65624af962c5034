#pragma once

#include <cstddef>
#include <span>

#include "graql/recognizer.hpp"

namespace graql {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    fp += o.fp;
    tn += o.tn;
    fn += o.fn;
    return *this;
  }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

// Every candidate goal is one binary decision: positive iff it is in the predicted set.
ConfusionCounts score_problem(const RecognitionResult& result, std::size_t true_goal, std::size_t num_goals);

struct MetricSummary {
  ConfusionCounts counts;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double fscore = 0.0;
};

// Micro-averaged over the summed counts. Precision is 1 when nothing was predicted
// positive; F is 0 when precision + recall is 0.
MetricSummary aggregate(std::span<const ConfusionCounts> counts);
MetricSummary summarize(const ConfusionCounts& counts);

}  // namespace graql
