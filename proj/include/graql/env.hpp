#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

namespace graql {

using StateId = std::uint32_t;
using ActionId = std::uint32_t;

enum class DomainKind { Grid, Blocks, Hanoi };

std::string_view domain_name(DomainKind kind);
DomainKind parse_domain(std::string_view name);

struct Cell {
  int x = 0;
  int y = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

// Construction parameters for an environment. Only the block matching `kind`
// is consulted. Start states use the textual state encoding of the domain;
// an empty string selects the domain default.
struct EnvConfig {
  DomainKind kind = DomainKind::Grid;

  int width = 5;
  int height = 5;
  std::vector<Cell> obstacles;

  int blocks = 3;
  int discs = 3;

  std::string start;
  std::size_t state_cap = 10'000'000;

  nlohmann::json to_json() const;
  static EnvConfig from_json(const nlohmann::json& j);
};

// Set of states satisfying a goal descriptor. The descriptor is a '&'-joined
// conjunction of atoms, e.g. "at(4,4)", "on(A,B)&ontable(B)", "state(AAC)".
class Goal {
 public:
  Goal() = default;
  Goal(std::string descriptor, std::vector<StateId> states, std::size_t num_states);

  const std::string& descriptor() const { return descriptor_; }
  std::span<const StateId> states() const { return states_; }
  bool contains(StateId s) const { return s < member_.size() && member_[s] != 0; }
  bool empty() const { return states_.empty(); }

 private:
  std::string descriptor_;
  std::vector<StateId> states_;
  std::vector<std::uint8_t> member_;
};

class DomainModel;

// A discrete deterministic environment with its reachable state space fully
// materialized. Immutable after construction.
class Environment {
 public:
  explicit Environment(EnvConfig config);
  ~Environment();
  Environment(Environment&&) noexcept;
  Environment& operator=(Environment&&) noexcept;
  Environment(const Environment&) = delete;
  Environment& operator=(const Environment&) = delete;

  const EnvConfig& config() const { return config_; }
  DomainKind kind() const { return config_.kind; }

  std::size_t num_states() const { return codes_.size(); }
  std::size_t num_actions() const { return action_names_.size(); }
  StateId initial_state() const { return initial_; }

  // Every reachable state once, in canonical-encoding order.
  std::vector<StateId> enumerate_states() const;

  // Inapplicable actions leave the state unchanged.
  StateId step(StateId s, ActionId a) const { return transitions_[static_cast<std::size_t>(s) * num_actions() + a]; }

  std::string state_name(StateId s) const;
  StateId state_id(std::string_view name) const;
  std::optional<StateId> find_state(std::string_view name) const;
  const std::string& action_name(ActionId a) const { return action_names_.at(a); }
  ActionId action_id(std::string_view name) const;

  Goal compile_goal(std::string_view descriptor) const;
  bool is_goal(const Goal& g, StateId s) const { return g.contains(s); }

  // Grid-only convenience accessors.
  Cell cell_of(StateId s) const;
  std::optional<StateId> state_at(Cell c) const;

  // Stable 64-bit fingerprint of the configuration (FNV-1a over canonical JSON).
  std::uint64_t fingerprint() const;

 private:
  EnvConfig config_;
  std::unique_ptr<DomainModel> model_;
  std::vector<std::uint64_t> codes_;
  std::unordered_map<std::uint64_t, StateId> index_;
  std::vector<StateId> transitions_;
  std::vector<std::string> action_names_;
  StateId initial_ = 0;
};

}  // namespace graql
