#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "graql/env.hpp"
#include "graql/measures.hpp"
#include "graql/observation.hpp"
#include "graql/policy.hpp"
#include "graql/qlearn.hpp"

namespace graql {

// Utility-based domain theory: one Q-table per candidate goal over a shared
// environment, with the per-goal ratio policies derived on first use.
class DomainTheory {
 public:
  DomainTheory(std::shared_ptr<const Environment> env, std::vector<Goal> goals, std::vector<QTable> tables,
               LearnConfig config);

  const Environment& env() const { return *env_; }
  std::shared_ptr<const Environment> env_ptr() const { return env_; }
  std::size_t num_goals() const { return goals_.size(); }
  const Goal& goal(std::size_t i) const { return goals_.at(i); }
  const QTable& table(std::size_t i) const { return tables_.at(i); }
  const LearnConfig& config() const { return config_; }
  std::uint64_t goal_seed(std::size_t i) const { return config_.seed + i; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  // Thread-safe; computed once per goal.
  const StochasticPolicy& policy(std::size_t i) const;

  // Directory of per-goal Q-table files plus manifest.json.
  void save(const std::filesystem::path& dir, bool binary = false) const;
  static DomainTheory load(const std::filesystem::path& dir);

 private:
  struct PolicyCache {
    std::once_flag once;
    StochasticPolicy policy;
  };

  std::shared_ptr<const Environment> env_;
  std::vector<Goal> goals_;
  std::vector<QTable> tables_;
  LearnConfig config_;
  std::vector<std::string> warnings_;
  std::shared_ptr<std::vector<PolicyCache>> policies_;
};

// Learns one table per goal; goal i trains with seed cfg.seed + i.
DomainTheory build_theory(std::shared_ptr<const Environment> env, const std::vector<std::string>& goals,
                          const LearnConfig& cfg, unsigned threads = 1);

struct InferOptions {
  // Keep only the last goal attaining the minimum instead of the full tie set.
  bool single_goal = false;
  // Divide each observation's state-only/action-only utility by its maximum over goals.
  bool normalized = false;
};

struct RecognitionResult {
  MeasureSpec measure;
  ObsFlavor flavor = ObsFlavor::StateAction;
  std::vector<double> distances;
  // Goal indices attaining the exact minimum distance, ascending.
  std::vector<std::size_t> predicted;

  bool predicts(std::size_t goal) const;
};

// Distance of every goal's table to `obs`. MaxUtil dispatches on the observation
// flavor; KL and DP require state-action observations.
RecognitionResult infer(const DomainTheory& theory, const ObservationSequence& obs, const MeasureSpec& measure,
                        const InferOptions& options = {});

}  // namespace graql
