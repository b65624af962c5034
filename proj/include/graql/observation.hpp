#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "graql/env.hpp"

namespace graql {

enum class ObsFlavor { StateAction, StateOnly, ActionOnly };

std::string_view flavor_name(ObsFlavor flavor);
ObsFlavor parse_flavor(std::string_view name);

// One observed step. `t` is the index of the step in the source trajectory;
// fields not carried by the sequence's flavor are ignored.
struct ObsItem {
  std::size_t t = 0;
  StateId state = 0;
  ActionId action = 0;
  friend bool operator==(const ObsItem&, const ObsItem&) = default;
};

struct ObservationSequence {
  ObsFlavor flavor = ObsFlavor::StateAction;
  std::vector<ObsItem> items;
  std::string problem_id;

  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }

  ObservationSequence states_only() const;
  ObservationSequence actions_only() const;

  friend bool operator==(const ObservationSequence&, const ObservationSequence&) = default;
};

// Line-per-item text form: a "# graql-obs v1 <flavor>" header, then
// "t state action" (state omitted for action-only, action omitted for state-only).
std::string to_text(const Environment& env, const ObservationSequence& obs);
ObservationSequence parse_observations(const Environment& env, std::string_view text);

// True when every consecutive pair of a state-action sequence is a legal transition
// and the item indices are contiguous.
bool is_contiguous_trace(const Environment& env, const ObservationSequence& obs);

}  // namespace graql
