#include "graql/env.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>

#include "graql/error.hpp"

namespace graql {

namespace {

struct Atom {
  std::string name;
  std::string raw_args;
  std::vector<std::string> args;
};

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (true) {
    const std::size_t end = text.find(sep, begin);
    out.emplace_back(text.substr(begin, end == std::string_view::npos ? std::string_view::npos : end - begin));
    if (end == std::string_view::npos) break;
    begin = end + 1;
  }
  return out;
}

std::optional<int> parse_int(std::string_view s) {
  if (s.empty()) return std::nullopt;
  int value = 0;
  bool negative = false;
  std::size_t i = 0;
  if (s[0] == '-') {
    negative = true;
    i = 1;
    if (s.size() == 1) return std::nullopt;
  }
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return std::nullopt;
    value = value * 10 + (s[i] - '0');
    if (value > 1'000'000) return std::nullopt;
  }
  return negative ? -value : value;
}

Atom parse_atom(std::string_view text) {
  Atom atom;
  const std::size_t open = text.find('(');
  if (open == std::string_view::npos) {
    atom.name = std::string(text);
    return atom;
  }
  if (text.back() != ')') fail(ErrorCode::Parse, "malformed goal atom '" + std::string(text) + "'");
  atom.name = std::string(text.substr(0, open));
  atom.raw_args = std::string(text.substr(open + 1, text.size() - open - 2));
  if (!atom.raw_args.empty()) atom.args = split(atom.raw_args, ',');
  return atom;
}

[[noreturn]] void bad_atom(const Atom& atom, std::string_view domain) {
  fail(ErrorCode::Parse, "goal atom '" + atom.name + "(" + atom.raw_args + ")' is not valid for domain " +
                             std::string(domain));
}

}  // namespace

class DomainModel {
 public:
  virtual ~DomainModel() = default;
  virtual std::vector<std::string> action_names() const = 0;
  virtual std::uint64_t start_code(const std::string& start) const = 0;
  virtual std::uint64_t successor(std::uint64_t code, ActionId a) const = 0;
  virtual std::string name(std::uint64_t code) const = 0;
  virtual std::optional<std::uint64_t> parse(std::string_view text) const = 0;
  virtual bool holds(const Atom& atom, std::uint64_t code) const = 0;
  // Exact state-space size when known in closed form, used to refuse oversize specs early.
  virtual std::optional<double> size_hint() const { return std::nullopt; }
};

namespace {

class GridModel final : public DomainModel {
 public:
  explicit GridModel(const EnvConfig& cfg) : width_(cfg.width), height_(cfg.height) {
    if (width_ < 1 || height_ < 1) fail(ErrorCode::InvalidArgument, "grid dimensions must be positive");
    blocked_.assign(static_cast<std::size_t>(width_) * height_, 0);
    for (const Cell& c : cfg.obstacles) {
      if (!inside(c)) fail(ErrorCode::InvalidArgument, "obstacle outside grid");
      blocked_[code_of(c)] = 1;
    }
  }

  std::vector<std::string> action_names() const override { return {"up", "down", "left", "right"}; }

  std::uint64_t start_code(const std::string& start) const override {
    if (start.empty()) {
      if (blocked_[0]) fail(ErrorCode::InvalidArgument, "default grid start (0,0) is an obstacle");
      return 0;
    }
    auto code = parse(start);
    if (!code) fail(ErrorCode::InvalidArgument, "invalid grid start '" + start + "'");
    return *code;
  }

  std::uint64_t successor(std::uint64_t code, ActionId a) const override {
    Cell c = cell(code);
    switch (a) {
      case 0: --c.y; break;
      case 1: ++c.y; break;
      case 2: --c.x; break;
      case 3: ++c.x; break;
      default: return code;
    }
    if (!inside(c) || blocked_[code_of(c)]) return code;
    return code_of(c);
  }

  std::string name(std::uint64_t code) const override {
    const Cell c = cell(code);
    return std::to_string(c.x) + "," + std::to_string(c.y);
  }

  std::optional<std::uint64_t> parse(std::string_view text) const override {
    const auto parts = split(text, ',');
    if (parts.size() != 2) return std::nullopt;
    const auto x = parse_int(parts[0]);
    const auto y = parse_int(parts[1]);
    if (!x || !y) return std::nullopt;
    const Cell c{*x, *y};
    if (!inside(c) || blocked_[code_of(c)]) return std::nullopt;
    return code_of(c);
  }

  bool holds(const Atom& atom, std::uint64_t code) const override {
    if (atom.name != "at" || atom.args.size() != 2) bad_atom(atom, "grid");
    const auto x = parse_int(atom.args[0]);
    const auto y = parse_int(atom.args[1]);
    if (!x || !y) bad_atom(atom, "grid");
    const Cell c = cell(code);
    return c.x == *x && c.y == *y;
  }

  std::optional<double> size_hint() const override { return static_cast<double>(width_) * height_; }

  Cell cell(std::uint64_t code) const {
    return {static_cast<int>(code % static_cast<std::uint64_t>(width_)),
            static_cast<int>(code / static_cast<std::uint64_t>(width_))};
  }

 private:
  bool inside(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  std::uint64_t code_of(Cell c) const { return static_cast<std::uint64_t>(c.y) * width_ + c.x; }

  int width_;
  int height_;
  std::vector<std::uint8_t> blocked_;
};

// Discs are numbered 1..n from smallest to largest; the code stores the peg of
// disc d in base-3 digit d-1.
class HanoiModel final : public DomainModel {
 public:
  explicit HanoiModel(const EnvConfig& cfg) : discs_(cfg.discs) {
    if (discs_ < 1 || discs_ > 30) fail(ErrorCode::InvalidArgument, "hanoi disc count must be in [1,30]");
  }

  std::vector<std::string> action_names() const override {
    std::vector<std::string> names;
    for (const auto& [from, to] : kMoves) names.push_back(std::string("move-") + peg_letter(from) + "-" + peg_letter(to));
    return names;
  }

  std::uint64_t start_code(const std::string& start) const override {
    if (start.empty()) return 0;
    auto code = parse(start);
    if (!code) fail(ErrorCode::InvalidArgument, "invalid hanoi start '" + start + "'");
    return *code;
  }

  std::uint64_t successor(std::uint64_t code, ActionId a) const override {
    if (a >= kMoves.size()) return code;
    const auto [from, to] = kMoves[a];
    const int top_from = top(code, from);
    if (top_from < 0) return code;
    const int top_to = top(code, to);
    if (top_to >= 0 && top_to < top_from) return code;
    return code + (static_cast<std::int64_t>(to) - from) * pow3(top_from);
  }

  std::string name(std::uint64_t code) const override {
    std::string out;
    for (int d = 0; d < discs_; ++d) out.push_back(peg_letter(peg(code, d)));
    return out;
  }

  std::optional<std::uint64_t> parse(std::string_view text) const override {
    if (text.size() != static_cast<std::size_t>(discs_)) return std::nullopt;
    std::uint64_t code = 0;
    for (int d = 0; d < discs_; ++d) {
      const int p = text[d] - 'A';
      if (p < 0 || p > 2) return std::nullopt;
      code += static_cast<std::uint64_t>(p) * pow3(d);
    }
    return code;
  }

  bool holds(const Atom& atom, std::uint64_t code) const override {
    if (atom.name == "on" && atom.args.size() == 2) {
      const auto d = parse_int(atom.args[0]);
      if (!d || *d < 1 || *d > discs_ || atom.args[1].size() != 1) bad_atom(atom, "hanoi");
      const int p = atom.args[1][0] - 'A';
      if (p < 0 || p > 2) bad_atom(atom, "hanoi");
      return peg(code, *d - 1) == p;
    }
    if (atom.name == "empty" && atom.args.size() == 1 && atom.args[0].size() == 1) {
      const int p = atom.args[0][0] - 'A';
      if (p < 0 || p > 2) bad_atom(atom, "hanoi");
      return top(code, p) < 0;
    }
    bad_atom(atom, "hanoi");
  }

  std::optional<double> size_hint() const override { return std::pow(3.0, discs_); }

 private:
  static constexpr std::array<std::pair<int, int>, 6> kMoves{{{0, 1}, {0, 2}, {1, 0}, {1, 2}, {2, 0}, {2, 1}}};

  static char peg_letter(int p) { return static_cast<char>('A' + p); }
  static std::uint64_t pow3(int d) {
    std::uint64_t v = 1;
    for (int i = 0; i < d; ++i) v *= 3;
    return v;
  }
  static int peg(std::uint64_t code, int d) { return static_cast<int>((code / pow3(d)) % 3); }

  // Smallest disc index on peg p, or -1 when the peg is empty.
  int top(std::uint64_t code, int p) const {
    for (int d = 0; d < discs_; ++d) {
      if (static_cast<int>(code % 3) == p) return d;
      code /= 3;
    }
    return -1;
  }

  int discs_;
};

// Classical four-operator blocks world. Each block stores its support:
// 0 = table, k+1 = on block k, n+1 = held.
class BlocksModel final : public DomainModel {
 public:
  explicit BlocksModel(const EnvConfig& cfg) : n_(cfg.blocks) {
    if (n_ < 1 || n_ > 12) fail(ErrorCode::InvalidArgument, "blocks count must be in [1,12]");
    for (int x = 0; x < n_; ++x) actions_.push_back({Op::Pickup, x, -1});
    for (int x = 0; x < n_; ++x) actions_.push_back({Op::Putdown, x, -1});
    for (int x = 0; x < n_; ++x)
      for (int y = 0; y < n_; ++y)
        if (x != y) actions_.push_back({Op::Stack, x, y});
    for (int x = 0; x < n_; ++x)
      for (int y = 0; y < n_; ++y)
        if (x != y) actions_.push_back({Op::Unstack, x, y});
  }

  std::vector<std::string> action_names() const override {
    static constexpr std::array<const char*, 4> kOps{"pickup", "putdown", "stack", "unstack"};
    std::vector<std::string> names;
    for (const auto& act : actions_) {
      std::string s = std::string(kOps[static_cast<int>(act.op)]) + "-" + letter(act.x);
      if (act.y >= 0) s += std::string("-") + letter(act.y);
      names.push_back(std::move(s));
    }
    return names;
  }

  std::uint64_t start_code(const std::string& start) const override {
    if (start.empty()) return 0;
    auto code = parse(start);
    if (!code) fail(ErrorCode::InvalidArgument, "invalid blocks start '" + start + "'");
    return *code;
  }

  std::uint64_t successor(std::uint64_t code, ActionId a) const override {
    if (a >= actions_.size()) return code;
    auto sup = decode(code);
    const auto& act = actions_[a];
    const int held = n_ + 1;
    switch (act.op) {
      case Op::Pickup:
        if (!hand_empty(sup) || sup[act.x] != 0 || !clear(sup, act.x)) return code;
        sup[act.x] = held;
        break;
      case Op::Putdown:
        if (sup[act.x] != held) return code;
        sup[act.x] = 0;
        break;
      case Op::Stack:
        if (sup[act.x] != held || sup[act.y] == held || !clear(sup, act.y)) return code;
        sup[act.x] = act.y + 1;
        break;
      case Op::Unstack:
        if (!hand_empty(sup) || sup[act.x] != act.y + 1 || !clear(sup, act.x)) return code;
        sup[act.x] = held;
        break;
    }
    return encode(sup);
  }

  std::string name(std::uint64_t code) const override {
    const auto sup = decode(code);
    std::string out;
    for (int i = 0; i < n_; ++i) {
      if (i) out.push_back(',');
      if (sup[i] == 0) out.push_back('t');
      else if (sup[i] == n_ + 1) out.push_back('h');
      else out.push_back(letter(sup[i] - 1));
    }
    return out;
  }

  std::optional<std::uint64_t> parse(std::string_view text) const override {
    const auto parts = split(text, ',');
    if (parts.size() != static_cast<std::size_t>(n_)) return std::nullopt;
    std::vector<int> sup(n_);
    for (int i = 0; i < n_; ++i) {
      if (parts[i].size() != 1) return std::nullopt;
      const char c = parts[i][0];
      if (c == 't') sup[i] = 0;
      else if (c == 'h') sup[i] = n_ + 1;
      else if (c >= 'A' && c < 'A' + n_) sup[i] = c - 'A' + 1;
      else return std::nullopt;
    }
    if (!legal(sup)) return std::nullopt;
    return encode(sup);
  }

  bool holds(const Atom& atom, std::uint64_t code) const override {
    const auto sup = decode(code);
    auto block = [&](const std::string& s) {
      if (s.size() != 1 || s[0] < 'A' || s[0] >= 'A' + n_) bad_atom(atom, "blocks");
      return s[0] - 'A';
    };
    if (atom.name == "handempty" && atom.args.empty()) return hand_empty(sup);
    if (atom.args.size() == 1) {
      const int x = block(atom.args[0]);
      if (atom.name == "ontable") return sup[x] == 0;
      if (atom.name == "holding") return sup[x] == n_ + 1;
      if (atom.name == "clear") return sup[x] != n_ + 1 && clear(sup, x);
    }
    if (atom.name == "on" && atom.args.size() == 2) {
      const int x = block(atom.args[0]);
      const int y = block(atom.args[1]);
      return sup[x] == y + 1;
    }
    bad_atom(atom, "blocks");
  }

 private:
  enum class Op { Pickup, Putdown, Stack, Unstack };
  struct Action {
    Op op;
    int x;
    int y;
  };

  static char letter(int b) { return static_cast<char>('A' + b); }

  std::vector<int> decode(std::uint64_t code) const {
    std::vector<int> sup(n_);
    const auto base = static_cast<std::uint64_t>(n_ + 2);
    for (int i = 0; i < n_; ++i) {
      sup[i] = static_cast<int>(code % base);
      code /= base;
    }
    return sup;
  }

  std::uint64_t encode(const std::vector<int>& sup) const {
    std::uint64_t code = 0;
    for (int i = n_ - 1; i >= 0; --i) code = code * static_cast<std::uint64_t>(n_ + 2) + static_cast<std::uint64_t>(sup[i]);
    return code;
  }

  bool hand_empty(const std::vector<int>& sup) const {
    return std::none_of(sup.begin(), sup.end(), [&](int v) { return v == n_ + 1; });
  }

  bool clear(const std::vector<int>& sup, int x) const {
    return std::none_of(sup.begin(), sup.end(), [&](int v) { return v == x + 1; });
  }

  bool legal(const std::vector<int>& sup) const {
    int held = 0;
    std::vector<int> below_count(n_, 0);
    for (int i = 0; i < n_; ++i) {
      if (sup[i] == n_ + 1) {
        ++held;
      } else if (sup[i] > 0) {
        const int y = sup[i] - 1;
        if (y == i || sup[y] == n_ + 1) return false;
        if (++below_count[y] > 1) return false;
      }
    }
    if (held > 1) return false;
    for (int i = 0; i < n_; ++i) {
      int cur = i;
      for (int steps = 0; sup[cur] > 0 && sup[cur] <= n_; ++steps) {
        if (steps > n_) return false;
        cur = sup[cur] - 1;
      }
    }
    return true;
  }

  int n_;
  std::vector<Action> actions_;
};

std::unique_ptr<DomainModel> make_model(const EnvConfig& cfg) {
  switch (cfg.kind) {
    case DomainKind::Grid: return std::make_unique<GridModel>(cfg);
    case DomainKind::Hanoi: return std::make_unique<HanoiModel>(cfg);
    case DomainKind::Blocks: return std::make_unique<BlocksModel>(cfg);
  }
  fail(ErrorCode::InvalidArgument, "unknown domain kind");
}

}  // namespace

std::string_view domain_name(DomainKind kind) {
  switch (kind) {
    case DomainKind::Grid: return "grid";
    case DomainKind::Blocks: return "blocks";
    case DomainKind::Hanoi: return "hanoi";
  }
  return "unknown";
}

DomainKind parse_domain(std::string_view name) {
  if (name == "grid") return DomainKind::Grid;
  if (name == "blocks") return DomainKind::Blocks;
  if (name == "hanoi") return DomainKind::Hanoi;
  fail(ErrorCode::InvalidArgument, "unknown domain '" + std::string(name) + "' (expected grid, blocks or hanoi)");
}

nlohmann::json EnvConfig::to_json() const {
  nlohmann::json j;
  j["domain"] = std::string(domain_name(kind));
  switch (kind) {
    case DomainKind::Grid: {
      j["width"] = width;
      j["height"] = height;
      auto obs = nlohmann::json::array();
      for (const Cell& c : obstacles) obs.push_back({c.x, c.y});
      j["obstacles"] = obs;
      break;
    }
    case DomainKind::Blocks: j["blocks"] = blocks; break;
    case DomainKind::Hanoi: j["discs"] = discs; break;
  }
  j["start"] = start;
  if (state_cap != 10'000'000) j["state_cap"] = state_cap;
  return j;
}

EnvConfig EnvConfig::from_json(const nlohmann::json& j) {
  try {
    EnvConfig cfg;
    cfg.kind = parse_domain(j.at("domain").get<std::string>());
    cfg.width = j.value("width", cfg.width);
    cfg.height = j.value("height", cfg.height);
    if (j.contains("obstacles")) {
      for (const auto& o : j.at("obstacles")) cfg.obstacles.push_back({o.at(0).get<int>(), o.at(1).get<int>()});
    }
    cfg.blocks = j.value("blocks", cfg.blocks);
    cfg.discs = j.value("discs", cfg.discs);
    cfg.start = j.value("start", std::string());
    cfg.state_cap = j.value("state_cap", cfg.state_cap);
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, std::string("invalid environment config: ") + e.what());
  }
}

Goal::Goal(std::string descriptor, std::vector<StateId> states, std::size_t num_states)
    : descriptor_(std::move(descriptor)), states_(std::move(states)), member_(num_states, 0) {
  std::sort(states_.begin(), states_.end());
  for (StateId s : states_) member_.at(s) = 1;
}

Environment::Environment(EnvConfig config) : config_(std::move(config)), model_(make_model(config_)) {
  if (config_.state_cap == 0) fail(ErrorCode::InvalidArgument, "state cap must be positive");
  if (auto hint = model_->size_hint(); hint && *hint > static_cast<double>(config_.state_cap)) {
    fail(ErrorCode::Capacity, "state space of " + std::to_string(static_cast<long double>(*hint)) +
                                  " states exceeds cap " + std::to_string(config_.state_cap));
  }
  action_names_ = model_->action_names();
  const std::size_t na = action_names_.size();
  const std::uint64_t start = model_->start_code(config_.start);

  // Breadth-first discovery of the reachable set, then canonical ordering by code.
  std::unordered_map<std::uint64_t, std::uint32_t> seen;
  std::vector<std::uint64_t> order{start};
  seen.emplace(start, 0);
  for (std::size_t head = 0; head < order.size(); ++head) {
    const std::uint64_t code = order[head];
    for (ActionId a = 0; a < na; ++a) {
      const std::uint64_t next = model_->successor(code, a);
      if (seen.emplace(next, 0).second) {
        if (order.size() >= config_.state_cap) {
          fail(ErrorCode::Capacity, "state space exceeds cap " + std::to_string(config_.state_cap));
        }
        order.push_back(next);
      }
    }
  }
  codes_ = std::move(order);
  std::sort(codes_.begin(), codes_.end());
  index_.reserve(codes_.size());
  for (std::size_t i = 0; i < codes_.size(); ++i) index_.emplace(codes_[i], static_cast<StateId>(i));

  transitions_.resize(codes_.size() * na);
  for (std::size_t i = 0; i < codes_.size(); ++i) {
    for (ActionId a = 0; a < na; ++a) transitions_[i * na + a] = index_.at(model_->successor(codes_[i], a));
  }
  initial_ = index_.at(start);
  config_.start = model_->name(start);
}

Environment::~Environment() = default;
Environment::Environment(Environment&&) noexcept = default;
Environment& Environment::operator=(Environment&&) noexcept = default;

std::vector<StateId> Environment::enumerate_states() const {
  std::vector<StateId> out(num_states());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<StateId>(i);
  return out;
}

std::string Environment::state_name(StateId s) const { return model_->name(codes_.at(s)); }

std::optional<StateId> Environment::find_state(std::string_view name) const {
  const auto code = model_->parse(name);
  if (!code) return std::nullopt;
  const auto it = index_.find(*code);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

StateId Environment::state_id(std::string_view name) const {
  if (auto s = find_state(name)) return *s;
  fail(ErrorCode::InvalidArgument, "unknown or unreachable state '" + std::string(name) + "'");
}

ActionId Environment::action_id(std::string_view name) const {
  for (ActionId a = 0; a < action_names_.size(); ++a) {
    if (action_names_[a] == name) return a;
  }
  fail(ErrorCode::InvalidArgument, "unknown action '" + std::string(name) + "'");
}

Goal Environment::compile_goal(std::string_view descriptor) const {
  if (descriptor.empty()) fail(ErrorCode::Parse, "empty goal descriptor");
  std::vector<Atom> atoms;
  for (const auto& part : split(descriptor, '&')) atoms.push_back(parse_atom(part));

  std::vector<std::optional<std::uint64_t>> exact;
  for (const Atom& atom : atoms) {
    if (atom.name == "state") {
      auto code = model_->parse(atom.raw_args);
      if (!code) fail(ErrorCode::Parse, "invalid state in goal atom 'state(" + atom.raw_args + ")'");
      exact.push_back(code);
    } else {
      // Validate atom syntax against the domain even if no state satisfies it.
      model_->holds(atom, codes_.front());
      exact.push_back(std::nullopt);
    }
  }

  std::vector<StateId> satisfying;
  for (std::size_t i = 0; i < codes_.size(); ++i) {
    bool ok = true;
    for (std::size_t k = 0; k < atoms.size() && ok; ++k) {
      ok = exact[k] ? *exact[k] == codes_[i] : model_->holds(atoms[k], codes_[i]);
    }
    if (ok) satisfying.push_back(static_cast<StateId>(i));
  }
  return Goal(std::string(descriptor), std::move(satisfying), num_states());
}

Cell Environment::cell_of(StateId s) const {
  if (kind() != DomainKind::Grid) fail(ErrorCode::Contract, "cell_of requires a grid environment");
  return static_cast<const GridModel&>(*model_).cell(codes_.at(s));
}

std::optional<StateId> Environment::state_at(Cell c) const {
  if (kind() != DomainKind::Grid) fail(ErrorCode::Contract, "state_at requires a grid environment");
  return find_state(std::to_string(c.x) + "," + std::to_string(c.y));
}

std::uint64_t Environment::fingerprint() const {
  const std::string text = config_.to_json().dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace graql
