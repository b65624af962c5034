#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "graql/env.hpp"
#include "graql/observation.hpp"

namespace graql {

struct LearnConfig {
  std::size_t episodes = 500;
  // 0 selects 4 * |S|.
  std::size_t max_steps = 0;
  double alpha = 0.1;
  double gamma = 0.9;
  double goal_reward = 100.0;
  double epsilon_start = 1.0;
  double epsilon_end = 0.01;
  std::uint64_t seed = 0;
  bool shaping = false;

  void validate() const;
  double epsilon_at(std::size_t episode) const;
  nlohmann::json to_json() const;
  static LearnConfig from_json(const nlohmann::json& j);
};

// Dense |S| x |A| table of action values for one goal.
class QTable {
 public:
  QTable() = default;
  QTable(std::size_t num_states, std::size_t num_actions, std::string goal = {});

  std::size_t num_states() const { return num_states_; }
  std::size_t num_actions() const { return num_actions_; }

  double operator()(StateId s, ActionId a) const { return values_[index(s, a)]; }
  double& at(StateId s, ActionId a) { return values_[index(s, a)]; }
  std::span<const double> row(StateId s) const {
    return {values_.data() + static_cast<std::size_t>(s) * num_actions_, num_actions_};
  }
  std::span<const double> values() const { return values_; }
  double row_max(StateId s) const;
  // Lowest-index maximizer.
  ActionId argmax(StateId s) const;

  const std::string& goal() const { return goal_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t episodes() const { return episodes_; }
  std::size_t goal_reach_count() const { return goal_reach_count_; }
  bool goal_reached() const { return goal_reach_count_ > 0; }

  void set_metadata(std::uint64_t seed, std::size_t episodes, std::size_t goal_reaches) {
    seed_ = seed;
    episodes_ = episodes;
    goal_reach_count_ = goal_reaches;
  }

  friend bool operator==(const QTable&, const QTable&) = default;

 private:
  std::size_t index(StateId s, ActionId a) const { return static_cast<std::size_t>(s) * num_actions_ + a; }

  std::size_t num_states_ = 0;
  std::size_t num_actions_ = 0;
  std::vector<double> values_;
  std::string goal_;
  std::uint64_t seed_ = 0;
  std::size_t episodes_ = 0;
  std::size_t goal_reach_count_ = 0;
};

// Text form: header "graql-qtable v1 |S| |A| goal seed episodes goal-reaches", then one line of
// |A| values per state, printed with enough digits to round-trip exactly.
void write_qtable_text(std::ostream& out, const QTable& q);
QTable read_qtable_text(std::istream& in);
// Binary form: "GRQB" magic, u32 version, u64 |S|, u64 |A|, u64 seed, u64 episodes,
// u64 goal reaches, u64 goal length, goal bytes, then |S|*|A| little-endian IEEE doubles.
void write_qtable_binary(std::ostream& out, const QTable& q);
QTable read_qtable_binary(std::istream& in);
// Dispatches on the ".qbin" extension.
void save_qtable(const std::filesystem::path& path, const QTable& q);
QTable load_qtable(const std::filesystem::path& path);

// s0, a0, s1, ..., sT. `states` always holds actions.size() + 1 entries.
struct Trajectory {
  std::vector<StateId> states;
  std::vector<ActionId> actions;
  bool reached_goal = false;

  std::size_t length() const { return actions.size(); }
  StateId final_state() const { return states.back(); }
  ObservationSequence to_observations() const;
};

enum class TieRule { Lexicographic, SeededRandom };

// Breadth-first distances to the nearest goal state along forward transitions;
// -1 marks states that cannot reach the goal.
std::vector<int> distances_to_goal(const Environment& env, const Goal& g);

// Shortest trajectory from `from` to `g`. Throws ErrorCode::NoPath when unreachable.
Trajectory optimal_path(const Environment& env, StateId from, const Goal& g, TieRule rule, std::uint64_t seed = 0);
Trajectory optimal_path(const Environment& env, std::span<const int> distances, StateId from, const Goal& g,
                        TieRule rule, std::uint64_t seed = 0);

// Follows the lowest-index argmax action until the goal or max_steps.
Trajectory greedy_rollout(const Environment& env, const QTable& q, const Goal& g, StateId from, std::size_t max_steps);

// Sets Q = 1 on every pair of `p` and 0 elsewhere. `p` must reach `g`.
QTable shape_init(QTable q, const Trajectory& p, const Goal& g);

struct TrainingStats {
  std::vector<std::uint32_t> state_visits;
  std::size_t total_steps = 0;
};

// Called once per Q update with the reward that update used. `terminal` marks
// updates that do not bootstrap.
using TransitionObserver = std::function<void(StateId s, ActionId a, double reward, StateId next, bool terminal)>;

// Tabular Q-learning for one goal: reward C for acting in a goal state (which ends
// the episode), 0 for every other step. Episodes start in the initial state.
QTable learn_q(const Environment& env, const Goal& g, const LearnConfig& cfg, TrainingStats* stats = nullptr,
               const TransitionObserver& observer = {});
// Continues from a caller-provided initial table (e.g. a shaped one).
QTable learn_q_from(const Environment& env, const Goal& g, const LearnConfig& cfg, QTable initial,
                    TrainingStats* stats = nullptr, const TransitionObserver& observer = {});

}  // namespace graql
