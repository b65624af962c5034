#include "graql/metrics.hpp"

#include "graql/error.hpp"

namespace graql {

ConfusionCounts score_problem(const RecognitionResult& result, std::size_t true_goal, std::size_t num_goals) {
  if (true_goal >= num_goals) fail(ErrorCode::InvalidArgument, "true goal index out of range");
  ConfusionCounts c;
  for (std::size_t g = 0; g < num_goals; ++g) {
    const bool positive = result.predicts(g);
    if (g == true_goal) (positive ? c.tp : c.fn) += 1;
    else (positive ? c.fp : c.tn) += 1;
  }
  return c;
}

MetricSummary summarize(const ConfusionCounts& c) {
  MetricSummary m;
  m.counts = c;
  const auto total = static_cast<double>(c.total());
  m.accuracy = total > 0 ? static_cast<double>(c.tp + c.tn) / total : 0.0;
  m.precision = c.tp + c.fp > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 1.0;
  m.recall = c.tp + c.fn > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
  m.fscore = m.precision + m.recall > 0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  return m;
}

MetricSummary aggregate(std::span<const ConfusionCounts> counts) {
  if (counts.empty()) fail(ErrorCode::InvalidArgument, "aggregate needs at least one problem");
  ConfusionCounts sum;
  for (const auto& c : counts) sum += c;
  return summarize(sum);
}

}  // namespace graql
