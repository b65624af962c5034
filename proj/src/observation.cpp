#include "graql/observation.hpp"

#include <sstream>

#include "graql/error.hpp"

namespace graql {

std::string_view flavor_name(ObsFlavor flavor) {
  switch (flavor) {
    case ObsFlavor::StateAction: return "state-action";
    case ObsFlavor::StateOnly: return "state-only";
    case ObsFlavor::ActionOnly: return "action-only";
  }
  return "unknown";
}

ObsFlavor parse_flavor(std::string_view name) {
  if (name == "state-action") return ObsFlavor::StateAction;
  if (name == "state-only") return ObsFlavor::StateOnly;
  if (name == "action-only") return ObsFlavor::ActionOnly;
  fail(ErrorCode::Parse, "unknown observation flavor '" + std::string(name) + "'");
}

ObservationSequence ObservationSequence::states_only() const {
  if (flavor == ObsFlavor::ActionOnly) fail(ErrorCode::Contract, "action-only observations carry no states");
  ObservationSequence out = *this;
  out.flavor = ObsFlavor::StateOnly;
  for (auto& item : out.items) item.action = 0;
  return out;
}

ObservationSequence ObservationSequence::actions_only() const {
  if (flavor == ObsFlavor::StateOnly) fail(ErrorCode::Contract, "state-only observations carry no actions");
  ObservationSequence out = *this;
  out.flavor = ObsFlavor::ActionOnly;
  for (auto& item : out.items) item.state = 0;
  return out;
}

std::string to_text(const Environment& env, const ObservationSequence& obs) {
  std::ostringstream out;
  out << "# graql-obs v1 " << flavor_name(obs.flavor) << "\n";
  for (const ObsItem& item : obs.items) {
    out << item.t;
    if (obs.flavor != ObsFlavor::ActionOnly) out << ' ' << env.state_name(item.state);
    if (obs.flavor != ObsFlavor::StateOnly) out << ' ' << env.action_name(item.action);
    out << '\n';
  }
  return out.str();
}

ObservationSequence parse_observations(const Environment& env, std::string_view text) {
  ObservationSequence obs;
  bool have_flavor = false;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string w; fields >> w;) tok.push_back(w);
    if (tok.empty()) continue;
    if (tok[0] == "#") {
      if (tok.size() == 4 && tok[1] == "graql-obs") {
        if (tok[2] != "v1") fail(ErrorCode::Parse, "unsupported observation format version " + tok[2]);
        obs.flavor = parse_flavor(tok[3]);
        have_flavor = true;
      }
      continue;
    }
    auto where = [&] { return " on observation line " + std::to_string(lineno); };
    ObsItem item;
    try {
      item.t = std::stoull(tok[0]);
    } catch (const std::exception&) {
      fail(ErrorCode::Parse, "bad step index" + where());
    }
    if (!have_flavor) {
      // Headerless input: infer the flavor from the first item.
      if (tok.size() == 3) obs.flavor = ObsFlavor::StateAction;
      else if (tok.size() == 2) obs.flavor = env.find_state(tok[1]) ? ObsFlavor::StateOnly : ObsFlavor::ActionOnly;
      have_flavor = true;
    }
    const std::size_t expected = obs.flavor == ObsFlavor::StateAction ? 3 : 2;
    if (tok.size() != expected) fail(ErrorCode::Parse, "expected " + std::to_string(expected) + " fields" + where());
    if (obs.flavor != ObsFlavor::ActionOnly) {
      auto s = env.find_state(tok[1]);
      if (!s) fail(ErrorCode::Parse, "unknown state '" + tok[1] + "'" + where());
      item.state = *s;
    }
    if (obs.flavor != ObsFlavor::StateOnly) item.action = env.action_id(tok.back());
    obs.items.push_back(item);
  }
  return obs;
}

bool is_contiguous_trace(const Environment& env, const ObservationSequence& obs) {
  if (obs.flavor != ObsFlavor::StateAction) return false;
  for (std::size_t i = 0; i + 1 < obs.items.size(); ++i) {
    const ObsItem& cur = obs.items[i];
    const ObsItem& next = obs.items[i + 1];
    if (next.t != cur.t + 1 || env.step(cur.state, cur.action) != next.state) return false;
  }
  return true;
}

}  // namespace graql
