#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "graql/env.hpp"
#include "graql/observation.hpp"
#include "graql/qlearn.hpp"

namespace graql {

enum class MeasureKind { MaxUtil, KL, DP };

std::string_view measure_name(MeasureKind kind);
MeasureKind parse_measure(std::string_view name);

struct MeasureSpec {
  MeasureKind kind = MeasureKind::MaxUtil;
  // Divergence threshold for DP, in (0,1).
  double delta = 0.1;
};

// All measures are distances: lower means the observations fit the table better.

// -sum_i Q(s_i, a_i).
double maxutil(const QTable& q, const ObservationSequence& obs);

// sum_i pi_g(a_i|s_i) log(pi_g(a_i|s_i) / pi_O(a_i|s_i)) with natural log and
// 0 log 0 = 0. pi_O is the observation pseudo-policy, so an earlier pair whose
// state was later observed with another action has pi_O = 0 and contributes +inf
// whenever pi_g gives it positive mass.
double kl(const QTable& q, const ObservationSequence& obs, const Environment& env);

// -t* where t* is the first 1-based step whose observed action has probability
// <= delta under the table's ratio policy; -(|obs| + 1) when no step diverges.
double divergence_point(const QTable& q, const ObservationSequence& obs, double delta);

// -sum_i max_a Q(s_i, a).
double maxutil_states(const QTable& q, const ObservationSequence& obs);

// -sum_i max_{s in Opt(a_i)} Q(s, a_i), Opt(a) = { s : Q(s,a) >= Q(s,a') for all a' };
// an empty Opt set contributes 0.
double maxutil_actions(const QTable& q, const ObservationSequence& obs);

// Per-observation utilities underlying maxutil_states / maxutil_actions (not negated).
std::vector<double> state_contributions(const QTable& q, const ObservationSequence& obs);
std::vector<double> action_contributions(const QTable& q, const ObservationSequence& obs);

}  // namespace graql
