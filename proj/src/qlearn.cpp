#include "graql/qlearn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "graql/error.hpp"
#include "graql/rng.hpp"

namespace graql {

void LearnConfig::validate() const {
  if (episodes < 1) fail(ErrorCode::InvalidArgument, "episodes must be >= 1");
  if (!(gamma > 0.0 && gamma <= 1.0)) fail(ErrorCode::InvalidArgument, "discount must be in (0,1]");
  if (!(alpha > 0.0 && alpha <= 1.0)) fail(ErrorCode::InvalidArgument, "learning rate must be in (0,1]");
  if (!(epsilon_start >= 0.0 && epsilon_start <= 1.0 && epsilon_end >= 0.0 && epsilon_end <= 1.0)) {
    fail(ErrorCode::InvalidArgument, "epsilon bounds must be in [0,1]");
  }
  if (!std::isfinite(goal_reward)) fail(ErrorCode::InvalidArgument, "goal reward must be finite");
}

double LearnConfig::epsilon_at(std::size_t episode) const {
  if (episodes <= 1) return epsilon_start;
  const double frac = static_cast<double>(episode) / static_cast<double>(episodes - 1);
  return epsilon_start + (epsilon_end - epsilon_start) * frac;
}

nlohmann::json LearnConfig::to_json() const {
  return {{"episodes", episodes}, {"max_steps", max_steps},     {"alpha", alpha},
          {"gamma", gamma},       {"goal_reward", goal_reward}, {"epsilon_start", epsilon_start},
          {"epsilon_end", epsilon_end}, {"seed", seed},        {"shaping", shaping}};
}

LearnConfig LearnConfig::from_json(const nlohmann::json& j) {
  LearnConfig c;
  try {
    c.episodes = j.value("episodes", c.episodes);
    c.max_steps = j.value("max_steps", c.max_steps);
    c.alpha = j.value("alpha", c.alpha);
    c.gamma = j.value("gamma", c.gamma);
    c.goal_reward = j.value("goal_reward", c.goal_reward);
    c.epsilon_start = j.value("epsilon_start", c.epsilon_start);
    c.epsilon_end = j.value("epsilon_end", c.epsilon_end);
    c.seed = j.value("seed", c.seed);
    c.shaping = j.value("shaping", c.shaping);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, std::string("invalid learn config: ") + e.what());
  }
  return c;
}

QTable::QTable(std::size_t num_states, std::size_t num_actions, std::string goal)
    : num_states_(num_states), num_actions_(num_actions), values_(num_states * num_actions, 0.0), goal_(std::move(goal)) {}

double QTable::row_max(StateId s) const {
  const auto r = row(s);
  return *std::max_element(r.begin(), r.end());
}

ActionId QTable::argmax(StateId s) const {
  const auto r = row(s);
  return static_cast<ActionId>(std::max_element(r.begin(), r.end()) - r.begin());
}

// ---------------------------------------------------------------- persistence

void write_qtable_text(std::ostream& out, const QTable& q) {
  const std::string goal = q.goal().empty() ? "-" : q.goal();
  if (goal.find_first_of(" \t\r\n") != std::string::npos) {
    fail(ErrorCode::InvalidArgument, "goal descriptor must not contain whitespace");
  }
  out << "graql-qtable v1 " << q.num_states() << ' ' << q.num_actions() << ' ' << goal << ' ' << q.seed() << ' '
      << q.episodes() << ' '
      << q.goal_reach_count() << '\n';
  char buf[32];
  for (StateId s = 0; s < q.num_states(); ++s) {
    const auto r = q.row(s);
    for (std::size_t a = 0; a < r.size(); ++a) {
      std::snprintf(buf, sizeof buf, "%.17g", r[a]);
      if (a) out << ' ';
      out << buf;
    }
    out << '\n';
  }
  if (!out) fail(ErrorCode::Io, "failed writing Q-table");
}

QTable read_qtable_text(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) fail(ErrorCode::Parse, "missing Q-table header");
  std::istringstream h(header);
  std::string magic, version, goal;
  std::size_t ns = 0, na = 0, episodes = 0, reaches = 0;
  std::uint64_t seed = 0;
  if (!(h >> magic >> version >> ns >> na >> goal >> seed >> episodes >> reaches) || magic != "graql-qtable") {
    fail(ErrorCode::Parse, "malformed Q-table header");
  }
  if (version != "v1") fail(ErrorCode::Parse, "unsupported Q-table version " + version);
  QTable q(ns, na, goal == "-" ? std::string() : goal);
  std::string token;
  for (StateId s = 0; s < ns; ++s) {
    for (ActionId a = 0; a < na; ++a) {
      if (!(in >> token)) fail(ErrorCode::Parse, "Q-table truncated at state " + std::to_string(s));
      char* end = nullptr;
      const double v = std::strtod(token.c_str(), &end);
      if (end != token.c_str() + token.size() || !std::isfinite(v)) {
        fail(ErrorCode::Parse, "bad Q value '" + token + "'");
      }
      q.at(s, a) = v;
    }
  }
  q.set_metadata(seed, episodes, reaches);
  return q;
}

namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) fail(ErrorCode::Parse, "binary Q-table truncated");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

constexpr std::uint32_t kBinaryVersion = 1;

}  // namespace

void write_qtable_binary(std::ostream& out, const QTable& q) {
  out.write("GRQB", 4);
  char ver[4];
  for (int i = 0; i < 4; ++i) ver[i] = static_cast<char>((kBinaryVersion >> (8 * i)) & 0xff);
  out.write(ver, 4);
  put_u64(out, q.num_states());
  put_u64(out, q.num_actions());
  put_u64(out, q.seed());
  put_u64(out, q.episodes());
  put_u64(out, q.goal_reach_count());
  put_u64(out, q.goal().size());
  out.write(q.goal().data(), static_cast<std::streamsize>(q.goal().size()));
  for (double v : q.values()) put_u64(out, std::bit_cast<std::uint64_t>(v));
  if (!out) fail(ErrorCode::Io, "failed writing binary Q-table");
}

QTable read_qtable_binary(std::istream& in) {
  char magic[4];
  unsigned char ver[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "GRQB", 4) != 0) fail(ErrorCode::Parse, "not a binary Q-table");
  if (!in.read(reinterpret_cast<char*>(ver), 4)) fail(ErrorCode::Parse, "binary Q-table truncated");
  const std::uint32_t version = ver[0] | (ver[1] << 8) | (ver[2] << 16) | (static_cast<std::uint32_t>(ver[3]) << 24);
  if (version != kBinaryVersion) fail(ErrorCode::Parse, "unsupported binary Q-table version");
  const std::uint64_t ns = get_u64(in);
  const std::uint64_t na = get_u64(in);
  const std::uint64_t seed = get_u64(in);
  const std::uint64_t episodes = get_u64(in);
  const std::uint64_t reaches = get_u64(in);
  const std::uint64_t goal_len = get_u64(in);
  if (goal_len > (1u << 20) || ns * na > (1ULL << 34)) fail(ErrorCode::Parse, "binary Q-table header out of range");
  std::string goal(goal_len, '\0');
  if (!in.read(goal.data(), static_cast<std::streamsize>(goal_len))) fail(ErrorCode::Parse, "binary Q-table truncated");
  QTable q(ns, na, goal);
  for (StateId s = 0; s < ns; ++s)
    for (ActionId a = 0; a < na; ++a) q.at(s, a) = std::bit_cast<double>(get_u64(in));
  q.set_metadata(seed, episodes, reaches);
  return q;
}

void save_qtable(const std::filesystem::path& path, const QTable& q) {
  const bool binary = path.extension() == ".qbin";
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) fail(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  if (binary) write_qtable_binary(out, q);
  else write_qtable_text(out, q);
}

QTable load_qtable(const std::filesystem::path& path) {
  const bool binary = path.extension() == ".qbin";
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  return binary ? read_qtable_binary(in) : read_qtable_text(in);
}

// ------------------------------------------------------------------ planning

ObservationSequence Trajectory::to_observations() const {
  ObservationSequence obs;
  obs.flavor = ObsFlavor::StateAction;
  for (std::size_t i = 0; i < actions.size(); ++i) obs.items.push_back({i, states[i], actions[i]});
  return obs;
}

std::vector<int> distances_to_goal(const Environment& env, const Goal& g) {
  const std::size_t ns = env.num_states();
  const std::size_t na = env.num_actions();
  // Reverse adjacency in CSR form.
  std::vector<std::uint32_t> offsets(ns + 1, 0);
  for (StateId s = 0; s < ns; ++s)
    for (ActionId a = 0; a < na; ++a) {
      const StateId t = env.step(s, a);
      if (t != s) ++offsets[t + 1];
    }
  for (std::size_t i = 0; i < ns; ++i) offsets[i + 1] += offsets[i];
  std::vector<StateId> preds(offsets.back());
  std::vector<std::uint32_t> fill(offsets.begin(), offsets.end() - 1);
  for (StateId s = 0; s < ns; ++s)
    for (ActionId a = 0; a < na; ++a) {
      const StateId t = env.step(s, a);
      if (t != s) preds[fill[t]++] = s;
    }

  std::vector<int> dist(ns, -1);
  std::vector<StateId> queue(g.states().begin(), g.states().end());
  for (StateId s : queue) dist[s] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const StateId t = queue[head];
    for (std::uint32_t k = offsets[t]; k < offsets[t + 1]; ++k) {
      const StateId p = preds[k];
      if (dist[p] < 0) {
        dist[p] = dist[t] + 1;
        queue.push_back(p);
      }
    }
  }
  return dist;
}

Trajectory optimal_path(const Environment& env, StateId from, const Goal& g, TieRule rule, std::uint64_t seed) {
  const auto dist = distances_to_goal(env, g);
  return optimal_path(env, dist, from, g, rule, seed);
}

Trajectory optimal_path(const Environment& env, std::span<const int> distances, StateId from, const Goal& g,
                        TieRule rule, std::uint64_t seed) {
  if (from >= env.num_states() || distances[from] < 0) {
    fail(ErrorCode::NoPath, "goal " + g.descriptor() + " unreachable from " + env.state_name(from));
  }
  Rng rng(seed);
  Trajectory p;
  p.states.push_back(from);
  StateId s = from;
  std::vector<ActionId> best;
  while (distances[s] > 0) {
    best.clear();
    for (ActionId a = 0; a < env.num_actions(); ++a) {
      if (distances[env.step(s, a)] == distances[s] - 1) best.push_back(a);
    }
    const ActionId a = rule == TieRule::Lexicographic ? best.front() : best[rng.index(best.size())];
    s = env.step(s, a);
    p.actions.push_back(a);
    p.states.push_back(s);
  }
  p.reached_goal = true;
  return p;
}

Trajectory greedy_rollout(const Environment& env, const QTable& q, const Goal& g, StateId from, std::size_t max_steps) {
  Trajectory p;
  p.states.push_back(from);
  StateId s = from;
  while (!g.contains(s) && p.actions.size() < max_steps) {
    const ActionId a = q.argmax(s);
    s = env.step(s, a);
    p.actions.push_back(a);
    p.states.push_back(s);
  }
  p.reached_goal = g.contains(s);
  return p;
}

QTable shape_init(QTable q, const Trajectory& p, const Goal& g) {
  if (p.states.empty() || !g.contains(p.final_state())) {
    fail(ErrorCode::InvalidArgument, "shaping trajectory does not reach goal " + g.descriptor());
  }
  QTable shaped(q.num_states(), q.num_actions(), q.goal());
  shaped.set_metadata(q.seed(), q.episodes(), q.goal_reach_count());
  for (std::size_t i = 0; i < p.actions.size(); ++i) shaped.at(p.states[i], p.actions[i]) = 1.0;
  return shaped;
}

// ------------------------------------------------------------------ learning

namespace {

ActionId epsilon_greedy(const QTable& q, StateId s, double epsilon, Rng& rng, std::vector<ActionId>& scratch) {
  const std::size_t na = q.num_actions();
  if (rng.uniform() < epsilon) return static_cast<ActionId>(rng.index(na));
  const auto r = q.row(s);
  const double best = *std::max_element(r.begin(), r.end());
  scratch.clear();
  for (ActionId a = 0; a < na; ++a)
    if (r[a] == best) scratch.push_back(a);
  return scratch.size() == 1 ? scratch.front() : scratch[rng.index(scratch.size())];
}

}  // namespace

QTable learn_q(const Environment& env, const Goal& g, const LearnConfig& cfg, TrainingStats* stats,
               const TransitionObserver& observer) {
  QTable initial(env.num_states(), env.num_actions(), g.descriptor());
  if (cfg.shaping && !g.empty()) {
    const auto dist = distances_to_goal(env, g);
    if (dist[env.initial_state()] >= 0) {
      initial = shape_init(std::move(initial), optimal_path(env, dist, env.initial_state(), g, TieRule::Lexicographic), g);
    }
  }
  return learn_q_from(env, g, cfg, std::move(initial), stats, observer);
}

QTable learn_q_from(const Environment& env, const Goal& g, const LearnConfig& cfg, QTable q, TrainingStats* stats,
                    const TransitionObserver& observer) {
  cfg.validate();
  if (q.num_states() != env.num_states() || q.num_actions() != env.num_actions()) {
    fail(ErrorCode::InvalidArgument, "initial Q-table dimensions do not match the environment");
  }
  Rng rng(cfg.seed);
  const std::size_t max_steps = cfg.max_steps ? cfg.max_steps : 4 * env.num_states();
  std::vector<ActionId> scratch;
  std::size_t reaches = 0;
  if (stats) {
    stats->state_visits.assign(env.num_states(), 0);
    stats->total_steps = 0;
  }

  // Acting in a goal state pays C and terminates; no bootstrap.
  auto goal_update = [&](StateId s, double epsilon) {
    const ActionId a = epsilon_greedy(q, s, epsilon, rng, scratch);
    double& v = q.at(s, a);
    v += cfg.alpha * (cfg.goal_reward - v);
    if (observer) observer(s, a, cfg.goal_reward, s, true);
    ++reaches;
  };

  for (std::size_t episode = 0; episode < cfg.episodes; ++episode) {
    const double epsilon = cfg.epsilon_at(episode);
    StateId s = env.initial_state();
    if (stats) ++stats->state_visits[s];
    if (g.contains(s)) {
      goal_update(s, epsilon);
      continue;
    }
    for (std::size_t step = 0; step < max_steps; ++step) {
      const ActionId a = epsilon_greedy(q, s, epsilon, rng, scratch);
      const StateId next = env.step(s, a);
      double& v = q.at(s, a);
      v += cfg.alpha * (cfg.gamma * q.row_max(next) - v);
      if (observer) observer(s, a, 0.0, next, false);
      if (stats) {
        ++stats->state_visits[next];
        ++stats->total_steps;
      }
      s = next;
      if (g.contains(s)) {
        goal_update(s, epsilon);
        break;
      }
    }
  }
  q.set_metadata(cfg.seed, cfg.episodes, reaches);
  return q;
}

}  // namespace graql
