#include <doctest.h>

#include <cmath>
#include <numeric>

#include "graql/policy.hpp"
#include "graql/rng.hpp"
#include "oracles.hpp"

using namespace graql;

namespace {
QTable rows(std::vector<std::vector<double>> values) {
  QTable q(values.size(), values.front().size());
  for (StateId s = 0; s < values.size(); ++s)
    for (ActionId a = 0; a < values[s].size(); ++a) q.at(s, a) = values[s][a];
  return q;
}
}  // namespace

TEST_CASE("ratio policy examples") {
  const StochasticPolicy uniform = derive_policy(rows({{1, 1, 1, 1}}));
  for (ActionId a = 0; a < 4; ++a) CHECK(uniform(0, a) == 0.25);

  const StochasticPolicy ratio = derive_policy(rows({{3, 1}}));
  CHECK(ratio(0, 0) == 0.75);
  CHECK(ratio(0, 1) == 0.25);

  const QTable shifted = rows({{-2, 0}, {1, 1}});
  CHECK(rescale_shift(shifted) == 2.0);
  const StochasticPolicy p = derive_policy(shifted);
  CHECK(p(0, 0) == 0.0);
  CHECK(p(0, 1) == 1.0);
  CHECK(p(1, 0) == 0.5);

  const StochasticPolicy zero = derive_policy(rows({{0, 0, 0}}));
  for (ActionId a = 0; a < 3; ++a) CHECK(zero(0, a) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("ratio_probability agrees with the materialized policy") {
  const QTable q = rows({{-1, 4, 2}, {0, 0, 0}, {5, 5, -3}});
  const StochasticPolicy p = derive_policy(q);
  const double shift = rescale_shift(q);
  for (StateId s = 0; s < 3; ++s)
    for (ActionId a = 0; a < 3; ++a) CHECK(ratio_probability(q, shift, s, a) == p(s, a));
}

TEST_CASE("policy properties on random tables") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    QTable q(6, 5);
    const bool allow_negative = trial % 2 == 1;
    for (StateId s = 0; s < 6; ++s)
      for (ActionId a = 0; a < 5; ++a) q.at(s, a) = (rng.uniform() - (allow_negative ? 0.5 : 0.0)) * 100.0;
    const StochasticPolicy p = derive_policy(q);
    const double global_min = *std::min_element(q.values().begin(), q.values().end());
    for (StateId s = 0; s < 6; ++s) {
      const auto r = p.row(s);
      CHECK(std::accumulate(r.begin(), r.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
      for (double v : r) CHECK((v >= 0.0 && v <= 1.0));
      if (!allow_negative) {
        const ActionId qa = q.argmax(s);
        CHECK(std::max_element(r.begin(), r.end()) - r.begin() == qa);
      }
      // The global minimum maps to probability zero in its row.
      for (ActionId a = 0; a < 5; ++a)
        if (allow_negative && q(s, a) == global_min) CHECK(p(s, a) == 0.0);
    }
    if (!allow_negative) {
      QTable scaled = q;
      for (StateId s = 0; s < 6; ++s)
        for (ActionId a = 0; a < 5; ++a) scaled.at(s, a) *= 3.5;
      const StochasticPolicy ps = derive_policy(scaled);
      for (StateId s = 0; s < 6; ++s)
        for (ActionId a = 0; a < 5; ++a) CHECK(ps(s, a) == doctest::Approx(p(s, a)).epsilon(1e-12));
    }
  }
}

TEST_CASE("pseudo policy") {
  EnvConfig cfg;
  cfg.width = cfg.height = 3;
  const Environment env(cfg);
  ObservationSequence obs;
  obs.items.push_back({0, 3, 1});
  const StochasticPolicy p = pseudo_policy(obs, env);
  for (ActionId a = 0; a < 4; ++a) CHECK(p(3, a) == (a == 1 ? 1.0 : 0.0));
  for (StateId s = 0; s < 9; ++s)
    if (s != 3)
      for (ActionId a = 0; a < 4; ++a) CHECK(p(s, a) == 0.25);

  const StochasticPolicy empty = pseudo_policy(ObservationSequence{}, env);
  for (StateId s = 0; s < 9; ++s)
    for (ActionId a = 0; a < 4; ++a) CHECK(empty(s, a) == 0.25);

  ObservationSequence all;
  for (StateId s = 0; s < 9; ++s) all.items.push_back({s, s, 2});
  const StochasticPolicy full = pseudo_policy(all, env);
  for (StateId s = 0; s < 9; ++s) CHECK(full(s, 2) == 1.0);

  // Most recent observation wins.
  ObservationSequence conflict;
  conflict.items = {{0, 4, 0}, {1, 4, 3}};
  const StochasticPolicy c = pseudo_policy(conflict, env);
  CHECK(c(4, 3) == 1.0);
  CHECK(c(4, 0) == 0.0);
}
