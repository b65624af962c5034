#pragma once

#include <span>
#include <vector>

#include "graql/env.hpp"
#include "graql/observation.hpp"
#include "graql/qlearn.hpp"

namespace graql {

// Row-stochastic |S| x |A| matrix of action probabilities.
class StochasticPolicy {
 public:
  StochasticPolicy() = default;
  StochasticPolicy(std::size_t num_states, std::size_t num_actions);

  std::size_t num_states() const { return num_states_; }
  std::size_t num_actions() const { return num_actions_; }
  double operator()(StateId s, ActionId a) const { return probs_[static_cast<std::size_t>(s) * num_actions_ + a]; }
  double& at(StateId s, ActionId a) { return probs_[static_cast<std::size_t>(s) * num_actions_ + a]; }
  std::span<const double> row(StateId s) const {
    return {probs_.data() + static_cast<std::size_t>(s) * num_actions_, num_actions_};
  }
  void set_uniform_row(StateId s);

 private:
  std::size_t num_states_ = 0;
  std::size_t num_actions_ = 0;
  std::vector<double> probs_;
};

// Additive shift that makes every value of `q` nonnegative: -min(Q) when the
// minimum is negative, otherwise 0.
double rescale_shift(const QTable& q);

// pi(a|s) = Q'(s,a) / sum_a' Q'(s,a') with Q' = Q + shift; rows with a zero
// denominator are uniform. Computes a single entry without materializing the policy.
double ratio_probability(const QTable& q, double shift, StateId s, ActionId a);

StochasticPolicy derive_policy(const QTable& q);

// One-hot rows at the observed action of each observed state (the most recent
// observation wins on conflicts); all other rows uniform.
StochasticPolicy pseudo_policy(const ObservationSequence& obs, const Environment& env);

}  // namespace graql
