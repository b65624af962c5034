#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "graql/error.hpp"
#include "graql/qlearn.hpp"
#include "oracles.hpp"

using namespace graql;

namespace {
Environment grid(int w, int h, std::string start = {}, std::vector<Cell> obstacles = {}) {
  EnvConfig cfg;
  cfg.width = w;
  cfg.height = h;
  cfg.start = std::move(start);
  cfg.obstacles = std::move(obstacles);
  return Environment(cfg);
}
LearnConfig config(std::size_t episodes, std::uint64_t seed = 7) {
  LearnConfig cfg;
  cfg.episodes = episodes;
  cfg.seed = seed;
  return cfg;
}
}  // namespace

TEST_CASE("two-cell chain converges to gamma * C") {
  const Environment env = grid(2, 1);
  const Goal g = env.compile_goal("at(1,0)");
  const QTable q = learn_q(env, g, config(5000));
  const QTable exact = oracle::value_iteration(env, g);
  const StateId left = env.state_id("0,0");
  const ActionId right = env.action_id("right");
  CHECK(exact(left, right) == doctest::Approx(90.0).epsilon(1e-12));
  CHECK(q(left, right) == doctest::Approx(exact(left, right)).epsilon(1e-9));
  CHECK(q.goal_reached());
}

TEST_CASE("unreachable goal yields an all-zero table") {
  const Environment env = grid(3, 1, {}, {{1, 0}});
  const Goal g = env.compile_goal("at(2,0)");
  const QTable q = learn_q(env, g, config(50));
  for (double v : q.values()) CHECK(v == 0.0);
  CHECK(q.goal_reach_count() == 0);
  CHECK(q.episodes() == 50);
}

TEST_CASE("seeded training is bit-identical") {
  const Environment env = grid(4, 4);
  const Goal g = env.compile_goal("at(3,2)");
  CHECK(learn_q(env, g, config(300, 11)) == learn_q(env, g, config(300, 11)));
  CHECK_FALSE(learn_q(env, g, config(300, 11)) == learn_q(env, g, config(300, 12)));
}

TEST_CASE("reward sparsity, nonnegativity and episode count") {
  const Environment env = grid(4, 3);
  const Goal g = env.compile_goal("at(3,2)");
  std::size_t goal_rewards = 0;
  bool sparse = true;
  TrainingStats stats;
  const QTable q = learn_q(env, g, config(200), &stats, [&](StateId s, ActionId, double r, StateId, bool terminal) {
    if (g.contains(s)) {
      sparse &= r == 100.0 && terminal;
      ++goal_rewards;
    } else {
      sparse &= r == 0.0 && !terminal;
    }
  });
  CHECK(sparse);
  CHECK(goal_rewards == q.goal_reach_count());
  CHECK(goal_rewards <= 200);
  for (double v : q.values()) CHECK(v >= 0.0);
  CHECK(stats.total_steps > 0);
}

TEST_CASE("learn config validation and schedule") {
  LearnConfig cfg;
  CHECK(cfg.epsilon_at(0) == 1.0);
  CHECK(cfg.epsilon_at(cfg.episodes - 1) == doctest::Approx(0.01));
  cfg.gamma = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = LearnConfig{};
  cfg.episodes = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = LearnConfig{};
  cfg.epsilon_start = 1.5;
  CHECK_THROWS_AS(cfg.validate(), Error);
  const LearnConfig back = LearnConfig::from_json(config(42, 9).to_json());
  CHECK(back.episodes == 42);
  CHECK(back.seed == 9);
}

TEST_CASE("qtable text and binary round trips are exact") {
  const Environment env = grid(3, 3);
  const Goal g = env.compile_goal("at(2,2)");
  const QTable q = learn_q(env, g, config(100));
  std::stringstream text;
  write_qtable_text(text, q);
  const std::string header = text.str().substr(0, text.str().find('\n'));
  CHECK(header.rfind("graql-qtable v1 9 4 at(2,2) 7 100", 0) == 0);
  CHECK(read_qtable_text(text) == q);

  std::stringstream bin(std::ios::in | std::ios::out | std::ios::binary);
  write_qtable_binary(bin, q);
  CHECK(bin.str().substr(0, 4) == "GRQB");
  CHECK(read_qtable_binary(bin) == q);

  const auto dir = std::filesystem::temp_directory_path() / "graql_qtable_test";
  std::filesystem::create_directories(dir);
  save_qtable(dir / "a.qtable", q);
  save_qtable(dir / "a.qbin", q);
  CHECK(load_qtable(dir / "a.qtable") == q);
  CHECK(load_qtable(dir / "a.qbin") == q);
  std::filesystem::remove_all(dir);

  std::stringstream bad("graql-qtable v9 1 1 - 0 0\n0\n");
  CHECK_THROWS_AS(read_qtable_text(bad), Error);
  CHECK_THROWS_AS(load_qtable("/nonexistent/q.qtable"), Error);
}

TEST_CASE("optimal paths") {
  const Environment env = grid(5, 5, "0,0");
  const Goal straight = env.compile_goal("at(2,0)");
  const Trajectory p = optimal_path(env, env.initial_state(), straight, TieRule::Lexicographic);
  CHECK(p.length() == 2);
  for (ActionId a : p.actions) CHECK(env.action_name(a) == "right");
  CHECK(p.reached_goal);

  const Goal diag = env.compile_goal("at(2,2)");
  const Trajectory lex = optimal_path(env, env.initial_state(), diag, TieRule::Lexicographic);
  CHECK(lex.length() == 4);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Trajectory r = optimal_path(env, env.initial_state(), diag, TieRule::SeededRandom, seed);
    CHECK(r.length() == 4);
    CHECK(diag.contains(r.final_state()));
    for (std::size_t i = 0; i < r.length(); ++i) CHECK(env.step(r.states[i], r.actions[i]) == r.states[i + 1]);
  }

  EnvConfig h;
  h.kind = DomainKind::Hanoi;
  h.discs = 3;
  const Environment hanoi(h);
  const Goal all_c = hanoi.compile_goal("state(CCC)");
  CHECK(optimal_path(hanoi, hanoi.initial_state(), all_c, TieRule::Lexicographic).length() == 7);

  const Environment walled = grid(3, 1, {}, {{1, 0}});
  try {
    optimal_path(walled, walled.initial_state(), walled.compile_goal("at(2,0)"), TieRule::Lexicographic);
    FAIL("expected no path");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoPath);
  }
}

TEST_CASE("greedy rollout on degenerate tables") {
  const Environment env = grid(3, 3, "1,1");
  const Goal g = env.compile_goal("at(2,2)");
  const QTable zero(env.num_states(), env.num_actions());
  const Trajectory r = greedy_rollout(env, zero, g, env.initial_state(), 5);
  CHECK(r.length() == 5);
  for (ActionId a : r.actions) CHECK(a == 0);
  CHECK_FALSE(r.reached_goal);
}

TEST_CASE("shaping") {
  const Environment env = grid(4, 4, "0,0");
  const Goal g = env.compile_goal("at(3,0)");
  const Trajectory p = optimal_path(env, env.initial_state(), g, TieRule::Lexicographic);
  REQUIRE(p.length() == 3);
  const QTable shaped = shape_init(QTable(env.num_states(), env.num_actions()), p, g);
  std::size_t ones = 0;
  for (double v : shaped.values()) {
    CHECK((v == 0.0 || v == 1.0));
    ones += v == 1.0;
  }
  CHECK(ones == 3);
  const Trajectory follow = greedy_rollout(env, shaped, g, env.initial_state(), 10);
  CHECK(follow.states == p.states);
  CHECK(follow.actions == p.actions);

  Trajectory short_path = p;
  short_path.states.pop_back();
  short_path.actions.pop_back();
  short_path.reached_goal = false;
  CHECK_THROWS_AS(shape_init(QTable(env.num_states(), env.num_actions()), short_path, g), Error);

  // Shaped and unshaped training end with the same optimal greedy cost.
  const Environment big = grid(5, 5, "0,0");
  const Goal far = big.compile_goal("at(4,4)");
  LearnConfig with = config(5000);
  with.shaping = true;
  const auto d = oracle::goal_distances(big, far);
  const Trajectory a = greedy_rollout(big, learn_q(big, far, with), far, big.initial_state(), 100);
  const Trajectory b = greedy_rollout(big, learn_q(big, far, config(5000)), far, big.initial_state(), 100);
  CHECK(a.reached_goal);
  CHECK(a.length() == static_cast<std::size_t>(d[big.initial_state()]));
  CHECK(b.length() == a.length());
}

TEST_CASE("converged tables agree with value iteration on visited states") {
  const Environment env = grid(4, 4, "0,0");
  const Goal g = env.compile_goal("at(3,3)");
  TrainingStats stats;
  const QTable q = learn_q(env, g, config(20000), &stats);
  const QTable exact = oracle::value_iteration(env, g);
  for (StateId s = 0; s < env.num_states(); ++s) {
    if (stats.state_visits[s] == 0) continue;
    CAPTURE(env.state_name(s));
    CHECK(q.row_max(s) == doctest::Approx(exact.row_max(s)).epsilon(1e-6));
  }
}
