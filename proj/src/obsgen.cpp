#include "graql/obsgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "graql/error.hpp"
#include "graql/rng.hpp"

namespace graql {

void VariantSpec::validate() const {
  if (!(ratio > 0.0 && ratio <= 1.0)) fail(ErrorCode::InvalidArgument, "observability ratio must be in (0,1]");
}

std::string VariantSpec::label() const {
  char buf[32];
  const double pct = ratio * 100.0;
  if (std::abs(pct - std::round(pct)) < 1e-9) std::snprintf(buf, sizeof buf, "%d", static_cast<int>(std::round(pct)));
  else std::snprintf(buf, sizeof buf, "%g", pct);
  return std::string(buf) + (noise ? "n" : "");
}

VariantSpec VariantSpec::parse(std::string_view label) {
  VariantSpec v;
  std::string text(label);
  if (!text.empty() && text.back() == 'n') {
    v.noise = true;
    text.pop_back();
  }
  char* end = nullptr;
  const double pct = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    fail(ErrorCode::InvalidArgument, "bad variant '" + std::string(label) + "' (expected e.g. 100, 30, 50n)");
  }
  v.ratio = pct / 100.0;
  v.validate();
  return v;
}

std::vector<VariantSpec> VariantSpec::standard_variants() {
  return {{0.1, false}, {0.3, false}, {0.5, false}, {0.7, false}, {1.0, false}, {0.5, true}, {1.0, true}};
}

ObservationSequence generate_optimal_obs(const Environment& env, const Goal& g, TieRule rule, std::uint64_t seed) {
  return optimal_path(env, env.initial_state(), g, rule, seed).to_observations();
}

std::vector<std::size_t> subsample_indices(std::size_t n, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio <= 1.0)) fail(ErrorCode::InvalidArgument, "observability ratio must be in (0,1]");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (n == 0 || ratio == 1.0) return idx;
  // The 1e-9 guards against products like 0.7 * 5 = 3.4999999999999996.
  const auto k = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n) + 0.5 + 1e-9)));
  Rng rng(seed);
  rng.shuffle(idx);
  idx.resize(std::min(k, n));
  std::sort(idx.begin(), idx.end());
  return idx;
}

ObservationSequence subsample(const ObservationSequence& obs, double ratio, std::uint64_t seed) {
  ObservationSequence out = obs;
  out.items.clear();
  for (std::size_t i : subsample_indices(obs.size(), ratio, seed)) out.items.push_back(obs.items[i]);
  return out;
}

ObservationSequence inject_noise(const Environment& env, const ObservationSequence& obs, const Goal& g,
                                 std::uint64_t seed) {
  if (obs.flavor != ObsFlavor::StateAction) fail(ErrorCode::Contract, "noise injection needs state-action observations");
  if (obs.empty()) fail(ErrorCode::Infeasible, "cannot inject noise into an empty trace");
  if (!is_contiguous_trace(env, obs)) fail(ErrorCode::Contract, "noise injection needs a contiguous trace");

  const auto dist = distances_to_goal(env, g);
  Rng rng(seed);
  auto away_actions = [&](StateId s) {
    std::vector<ActionId> out;
    for (ActionId a = 0; a < env.num_actions(); ++a) {
      const int d = dist[env.step(s, a)];
      if (d >= 0 && d > dist[s]) out.push_back(a);
    }
    rng.shuffle(out);
    return out;
  };

  std::vector<std::size_t> order(obs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order);
  for (std::size_t i : order) {
    const StateId s0 = obs.items[i].state;
    if (dist[s0] < 0) continue;
    for (ActionId a1 : away_actions(s0)) {
      const StateId s1 = env.step(s0, a1);
      const auto second = away_actions(s1);
      if (second.empty()) continue;
      const ActionId a2 = second.front();
      const StateId s2 = env.step(s1, a2);

      ObservationSequence out;
      out.flavor = ObsFlavor::StateAction;
      out.problem_id = obs.problem_id;
      for (std::size_t k = 0; k < i; ++k) out.items.push_back(obs.items[k]);
      out.items.push_back({i, s0, a1});
      out.items.push_back({i + 1, s1, a2});
      const Trajectory back = optimal_path(env, dist, s2, g, TieRule::SeededRandom, rng.next());
      for (std::size_t k = 0; k < back.actions.size(); ++k) out.items.push_back({i + 2 + k, back.states[k], back.actions[k]});
      return out;
    }
  }
  fail(ErrorCode::Infeasible, "no step admits two consecutive distance-increasing actions toward " + g.descriptor());
}

}  // namespace graql
