#pragma once

// Reference computations the library is checked against. They share no code
// with the implementation beyond the environment's transition table.

#include <cstdint>
#include <limits>
#include <vector>

#include "graql/env.hpp"
#include "graql/qlearn.hpp"

namespace oracle {

// Fixed point of Q(s,a) = C for goal s, gamma * max_a' Q(step(s,a), a') otherwise,
// iterated to exact stability.
inline graql::QTable value_iteration(const graql::Environment& env, const graql::Goal& g, double gamma = 0.9,
                                     double reward = 100.0) {
  const auto ns = env.num_states();
  const auto na = env.num_actions();
  graql::QTable q(ns, na, g.descriptor());
  for (std::size_t iter = 0; iter < 10 * ns + 10; ++iter) {
    graql::QTable next = q;
    bool changed = false;
    for (graql::StateId s = 0; s < ns; ++s) {
      for (graql::ActionId a = 0; a < na; ++a) {
        double v = reward;
        if (!g.contains(s)) {
          const graql::StateId t = env.step(s, a);
          double best = 0.0;
          for (graql::ActionId b = 0; b < na; ++b) best = std::max(best, q(t, b));
          v = gamma * best;
        }
        if (v != q(s, a)) changed = true;
        next.at(s, a) = v;
      }
    }
    q = std::move(next);
    if (!changed) break;
  }
  return q;
}

// Shortest distance from every state to the goal by repeated relaxation
// (Bellman-Ford style, deliberately not BFS); -1 when unreachable.
inline std::vector<int> goal_distances(const graql::Environment& env, const graql::Goal& g) {
  const int inf = std::numeric_limits<int>::max();
  std::vector<int> d(env.num_states(), inf);
  for (auto s : g.states()) d[s] = 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (graql::StateId s = 0; s < env.num_states(); ++s) {
      for (graql::ActionId a = 0; a < env.num_actions(); ++a) {
        const int dt = d[env.step(s, a)];
        if (dt != inf && dt + 1 < d[s]) {
          d[s] = dt + 1;
          changed = true;
        }
      }
    }
  }
  for (auto& v : d)
    if (v == inf) v = -1;
  return d;
}

// Counts legal blocks-world configurations by brute force over every support
// assignment: each block rests on the table, in the hand, or on another block.
// Legal: at most one block held, nothing on a held block, at most one block on
// any block, and no support cycles.
inline std::uint64_t blocks_brute_force(int n) {
  const int options = n + 2;  // 0 table, 1..n block, n+1 hand
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::uint64_t>(options);
  std::uint64_t legal = 0;
  std::vector<int> sup(n);
  for (std::uint64_t code = 0; code < total; ++code) {
    std::uint64_t c = code;
    for (int i = 0; i < n; ++i) {
      sup[i] = static_cast<int>(c % options);
      c /= options;
    }
    bool ok = true;
    int held = 0;
    std::vector<int> on_top(n, 0);
    for (int i = 0; i < n && ok; ++i) {
      if (sup[i] == n + 1) ++held;
      else if (sup[i] >= 1) {
        const int below = sup[i] - 1;
        if (below == i || sup[below] == n + 1) ok = false;
        else if (++on_top[below] > 1) ok = false;
      }
    }
    if (!ok || held > 1) continue;
    for (int i = 0; i < n && ok; ++i) {
      int cur = i;
      for (int steps = 0; steps <= n; ++steps) {
        if (sup[cur] == 0 || sup[cur] == n + 1) break;
        cur = sup[cur] - 1;
        if (steps == n) ok = false;
      }
    }
    if (ok) ++legal;
  }
  return legal;
}

// Number of ways to arrange n labelled blocks into unordered towers:
// sum_k L(n,k), with Lah numbers L(n,k) = C(n-1,k-1) n!/k!.
inline std::uint64_t tower_arrangements(int n) {
  if (n == 0) return 1;
  auto fact = [](int m) {
    std::uint64_t f = 1;
    for (int i = 2; i <= m; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
  };
  auto choose = [&](int a, int b) { return fact(a) / (fact(b) * fact(a - b)); };
  std::uint64_t sum = 0;
  for (int k = 1; k <= n; ++k) sum += choose(n - 1, k - 1) * fact(n) / fact(k);
  return sum;
}

// Hand-empty arrangements plus one held block over arrangements of the rest.
inline std::uint64_t blocks_closed_form(int n) {
  return tower_arrangements(n) + static_cast<std::uint64_t>(n) * tower_arrangements(n - 1);
}

// max over Opt(a) = { s : Q(s,a) >= Q(s,b) for all b } of Q(s,a); 0 when Opt is empty.
inline double opt_contribution(const graql::QTable& q, graql::ActionId a) {
  bool any = false;
  double best = 0.0;
  for (graql::StateId s = 0; s < q.num_states(); ++s) {
    bool optimal = true;
    for (graql::ActionId b = 0; b < q.num_actions(); ++b)
      if (q(s, a) < q(s, b)) optimal = false;
    if (!optimal) continue;
    if (!any || q(s, a) > best) best = q(s, a);
    any = true;
  }
  return any ? best : 0.0;
}

}  // namespace oracle
