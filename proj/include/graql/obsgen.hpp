#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "graql/env.hpp"
#include "graql/observation.hpp"
#include "graql/qlearn.hpp"

namespace graql {

// One observability/noise condition of the evaluation protocol.
struct VariantSpec {
  double ratio = 1.0;
  bool noise = false;

  void validate() const;
  // Percent of observed steps plus an "n" suffix for noisy variants, e.g. "100", "50n".
  std::string label() const;
  static VariantSpec parse(std::string_view label);
  // 10/30/50/70/100 without noise, then 50 and 100 with noise.
  static std::vector<VariantSpec> standard_variants();

  friend bool operator==(const VariantSpec&, const VariantSpec&) = default;
};

// Full state-action trace of an optimal path from the initial state.
ObservationSequence generate_optimal_obs(const Environment& env, const Goal& g, TieRule rule, std::uint64_t seed);

// Kept item positions: the first k = max(1, round-half-up(ratio * n)) entries of a
// seeded permutation, sorted. For a fixed seed, smaller ratios keep subsets.
std::vector<std::size_t> subsample_indices(std::size_t n, double ratio, std::uint64_t seed);
ObservationSequence subsample(const ObservationSequence& obs, double ratio, std::uint64_t seed);

// Replaces the suffix of an optimal trace from a random step with two consecutive
// valid actions that each strictly increase the distance to the goal, followed by
// a fresh optimal path to the goal. Throws ErrorCode::Infeasible when no step admits
// such a detour.
ObservationSequence inject_noise(const Environment& env, const ObservationSequence& obs, const Goal& g,
                                 std::uint64_t seed);

}  // namespace graql
