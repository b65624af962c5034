#include "graql/measures.hpp"

#include <cmath>
#include <limits>
#include <unordered_map>

#include "graql/error.hpp"
#include "graql/policy.hpp"

namespace graql {

namespace {

void require_flavor(const ObservationSequence& obs, ObsFlavor flavor, std::string_view measure) {
  if (obs.flavor != flavor) {
    fail(ErrorCode::Contract, std::string(measure) + " requires " + std::string(flavor_name(flavor)) +
                                  " observations, got " + std::string(flavor_name(obs.flavor)));
  }
}

}  // namespace

std::string_view measure_name(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::MaxUtil: return "maxutil";
    case MeasureKind::KL: return "kl";
    case MeasureKind::DP: return "dp";
  }
  return "unknown";
}

MeasureKind parse_measure(std::string_view name) {
  if (name == "maxutil") return MeasureKind::MaxUtil;
  if (name == "kl") return MeasureKind::KL;
  if (name == "dp") return MeasureKind::DP;
  fail(ErrorCode::InvalidArgument, "unknown measure '" + std::string(name) + "'");
}

double maxutil(const QTable& q, const ObservationSequence& obs) {
  require_flavor(obs, ObsFlavor::StateAction, "MaxUtil");
  double sum = 0.0;
  for (const ObsItem& item : obs.items) sum += q(item.state, item.action);
  return -sum;
}

double kl(const QTable& q, const ObservationSequence& obs, const Environment& env) {
  require_flavor(obs, ObsFlavor::StateAction, "KL");
  if (q.num_states() != env.num_states()) fail(ErrorCode::Contract, "Q-table does not match environment");
  std::unordered_map<StateId, ActionId> last;
  for (const ObsItem& item : obs.items) last[item.state] = item.action;

  const double shift = rescale_shift(q);
  double sum = 0.0;
  for (const ObsItem& item : obs.items) {
    const double p = ratio_probability(q, shift, item.state, item.action);
    if (p == 0.0) continue;
    const double o = last.at(item.state) == item.action ? 1.0 : 0.0;
    if (o == 0.0) return std::numeric_limits<double>::infinity();
    sum += p * std::log(p / o);
  }
  return sum;
}

double divergence_point(const QTable& q, const ObservationSequence& obs, double delta) {
  require_flavor(obs, ObsFlavor::StateAction, "DP");
  if (!(delta > 0.0 && delta < 1.0)) fail(ErrorCode::InvalidArgument, "DP threshold must be in (0,1)");
  const double shift = rescale_shift(q);
  for (std::size_t i = 0; i < obs.items.size(); ++i) {
    if (ratio_probability(q, shift, obs.items[i].state, obs.items[i].action) <= delta) {
      return -static_cast<double>(i + 1);
    }
  }
  return -static_cast<double>(obs.items.size() + 1);
}

std::vector<double> state_contributions(const QTable& q, const ObservationSequence& obs) {
  require_flavor(obs, ObsFlavor::StateOnly, "state-only MaxUtil");
  std::vector<double> out;
  out.reserve(obs.size());
  for (const ObsItem& item : obs.items) out.push_back(q.row_max(item.state));
  return out;
}

std::vector<double> action_contributions(const QTable& q, const ObservationSequence& obs) {
  require_flavor(obs, ObsFlavor::ActionOnly, "action-only MaxUtil");
  // best[a] = max Q(s,a) over states where a is a maximizing action.
  std::vector<double> best(q.num_actions(), 0.0);
  std::vector<std::uint8_t> seen(q.num_actions(), 0);
  for (StateId s = 0; s < q.num_states(); ++s) {
    const double m = q.row_max(s);
    const auto r = q.row(s);
    for (ActionId a = 0; a < r.size(); ++a) {
      if (r[a] >= m && (!seen[a] || r[a] > best[a])) {
        best[a] = r[a];
        seen[a] = 1;
      }
    }
  }
  std::vector<double> out;
  out.reserve(obs.size());
  for (const ObsItem& item : obs.items) {
    if (item.action >= q.num_actions()) fail(ErrorCode::InvalidArgument, "observed action out of range");
    out.push_back(seen[item.action] ? best[item.action] : 0.0);
  }
  return out;
}

double maxutil_states(const QTable& q, const ObservationSequence& obs) {
  double sum = 0.0;
  for (double v : state_contributions(q, obs)) sum += v;
  return -sum;
}

double maxutil_actions(const QTable& q, const ObservationSequence& obs) {
  double sum = 0.0;
  for (double v : action_contributions(q, obs)) sum += v;
  return -sum;
}

}  // namespace graql
