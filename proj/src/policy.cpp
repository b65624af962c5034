#include "graql/policy.hpp"

#include <algorithm>

#include "graql/error.hpp"

namespace graql {

StochasticPolicy::StochasticPolicy(std::size_t num_states, std::size_t num_actions)
    : num_states_(num_states), num_actions_(num_actions), probs_(num_states * num_actions, 0.0) {}

void StochasticPolicy::set_uniform_row(StateId s) {
  const double p = 1.0 / static_cast<double>(num_actions_);
  for (ActionId a = 0; a < num_actions_; ++a) at(s, a) = p;
}

double rescale_shift(const QTable& q) {
  const auto v = q.values();
  if (v.empty()) return 0.0;
  const double lo = *std::min_element(v.begin(), v.end());
  return lo < 0.0 ? -lo : 0.0;
}

double ratio_probability(const QTable& q, double shift, StateId s, ActionId a) {
  const auto r = q.row(s);
  double total = 0.0;
  for (double v : r) total += v + shift;
  if (total == 0.0) return 1.0 / static_cast<double>(r.size());
  return (r[a] + shift) / total;
}

StochasticPolicy derive_policy(const QTable& q) {
  const double shift = rescale_shift(q);
  StochasticPolicy pi(q.num_states(), q.num_actions());
  for (StateId s = 0; s < q.num_states(); ++s) {
    const auto r = q.row(s);
    double total = 0.0;
    for (double v : r) total += v + shift;
    if (total == 0.0) {
      pi.set_uniform_row(s);
      continue;
    }
    for (ActionId a = 0; a < r.size(); ++a) pi.at(s, a) = (r[a] + shift) / total;
  }
  return pi;
}

StochasticPolicy pseudo_policy(const ObservationSequence& obs, const Environment& env) {
  if (obs.flavor != ObsFlavor::StateAction) fail(ErrorCode::Contract, "pseudo-policy needs state-action observations");
  StochasticPolicy pi(env.num_states(), env.num_actions());
  std::vector<std::uint8_t> observed(env.num_states(), 0);
  for (const ObsItem& item : obs.items) {
    for (ActionId a = 0; a < env.num_actions(); ++a) pi.at(item.state, a) = 0.0;
    pi.at(item.state, item.action) = 1.0;
    observed[item.state] = 1;
  }
  for (StateId s = 0; s < env.num_states(); ++s)
    if (!observed[s]) pi.set_uniform_row(s);
  return pi;
}

}  // namespace graql
