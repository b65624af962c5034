#include "graql/graql.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <string>

#include "graql/bench.hpp"
#include "graql/error.hpp"
#include "graql/recognizer.hpp"

struct graql_env {
  std::shared_ptr<const graql::Environment> env;
};
struct graql_qtable {
  graql::QTable table;
};
struct graql_theory {
  std::unique_ptr<graql::DomainTheory> theory;
  std::vector<graql_qtable> tables;
};
struct graql_result {
  graql::RecognitionResult result;
};
struct graql_suite {
  graql::ProblemSuite suite;
};
struct graql_report {
  graql::BenchmarkReport report;
};

namespace {

thread_local std::string last_error;

graql_status to_status(graql::ErrorCode code) {
  switch (code) {
    case graql::ErrorCode::InvalidArgument: return GRAQL_INVALID_ARGUMENT;
    case graql::ErrorCode::Capacity: return GRAQL_CAPACITY;
    case graql::ErrorCode::NoPath: return GRAQL_NO_PATH;
    case graql::ErrorCode::Infeasible: return GRAQL_INFEASIBLE;
    case graql::ErrorCode::Contract: return GRAQL_CONTRACT;
    case graql::ErrorCode::Io: return GRAQL_IO;
    case graql::ErrorCode::Parse: return GRAQL_PARSE;
  }
  return GRAQL_INTERNAL;
}

template <typename F>
graql_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return GRAQL_OK;
  } catch (const graql::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const nlohmann::json::exception& e) {
    last_error = e.what();
    return GRAQL_PARSE;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return GRAQL_CAPACITY;
  } catch (const std::exception& e) {
    last_error = e.what();
    return GRAQL_INTERNAL;
  }
}

void require(bool cond, const char* what) {
  if (!cond) graql::fail(graql::ErrorCode::InvalidArgument, what);
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

nlohmann::json parse_json(const char* text) {
  if (!text || !*text) return nlohmann::json::object();
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    graql::fail(graql::ErrorCode::Parse, e.what());
  }
}

graql::LearnConfig learn_config(const char* json) {
  auto cfg = graql::LearnConfig::from_json(parse_json(json));
  cfg.validate();
  return cfg;
}

}  // namespace

extern "C" {

const char* graql_last_error(void) { return last_error.c_str(); }

const char* graql_status_name(graql_status status) {
  switch (status) {
    case GRAQL_OK: return "ok";
    case GRAQL_INVALID_ARGUMENT: return "invalid argument";
    case GRAQL_CAPACITY: return "capacity exceeded";
    case GRAQL_NO_PATH: return "no path";
    case GRAQL_INFEASIBLE: return "infeasible";
    case GRAQL_CONTRACT: return "contract violation";
    case GRAQL_IO: return "i/o error";
    case GRAQL_PARSE: return "parse error";
    case GRAQL_INTERNAL: return "internal error";
  }
  return "unknown";
}

void graql_string_free(char* s) { std::free(s); }

// ------------------------------------------------------------ environments

graql_status graql_env_create(const char* config_json, graql_env** out) {
  return guarded([&] {
    require(config_json && out, "null argument");
    auto cfg = graql::EnvConfig::from_json(parse_json(config_json));
    *out = new graql_env{std::make_shared<const graql::Environment>(std::move(cfg))};
  });
}

void graql_env_free(graql_env* env) { delete env; }
size_t graql_env_num_states(const graql_env* env) { return env ? env->env->num_states() : 0; }
size_t graql_env_num_actions(const graql_env* env) { return env ? env->env->num_actions() : 0; }
uint32_t graql_env_initial_state(const graql_env* env) { return env ? env->env->initial_state() : 0; }

graql_status graql_env_step(const graql_env* env, uint32_t state, uint32_t action, uint32_t* out) {
  return guarded([&] {
    require(env && out, "null argument");
    require(state < env->env->num_states() && action < env->env->num_actions(), "state or action out of range");
    *out = env->env->step(state, action);
  });
}

graql_status graql_env_state_name(const graql_env* env, uint32_t state, char** out) {
  return guarded([&] {
    require(env && out, "null argument");
    require(state < env->env->num_states(), "state out of range");
    *out = dup_string(env->env->state_name(state));
  });
}

graql_status graql_env_state_id(const graql_env* env, const char* name, uint32_t* out) {
  return guarded([&] {
    require(env && name && out, "null argument");
    *out = env->env->state_id(name);
  });
}

graql_status graql_env_action_name(const graql_env* env, uint32_t action, char** out) {
  return guarded([&] {
    require(env && out, "null argument");
    require(action < env->env->num_actions(), "action out of range");
    *out = dup_string(env->env->action_name(action));
  });
}

graql_status graql_env_action_id(const graql_env* env, const char* name, uint32_t* out) {
  return guarded([&] {
    require(env && name && out, "null argument");
    *out = env->env->action_id(name);
  });
}

graql_status graql_env_goal_size(const graql_env* env, const char* goal, size_t* out) {
  return guarded([&] {
    require(env && goal && out, "null argument");
    *out = env->env->compile_goal(goal).states().size();
  });
}

// ----------------------------------------------------------------- tables

graql_status graql_qtable_learn(const graql_env* env, const char* goal, const char* learn_json, graql_qtable** out) {
  return guarded([&] {
    require(env && goal && out, "null argument");
    const auto cfg = learn_config(learn_json);
    const graql::Goal g = env->env->compile_goal(goal);
    *out = new graql_qtable{graql::learn_q(*env->env, g, cfg)};
  });
}

graql_status graql_qtable_load(const char* path, graql_qtable** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new graql_qtable{graql::load_qtable(path)};
  });
}

graql_status graql_qtable_save(const graql_qtable* q, const char* path) {
  return guarded([&] {
    require(q && path, "null argument");
    graql::save_qtable(path, q->table);
  });
}

void graql_qtable_free(graql_qtable* q) { delete q; }
size_t graql_qtable_num_states(const graql_qtable* q) { return q ? q->table.num_states() : 0; }
size_t graql_qtable_num_actions(const graql_qtable* q) { return q ? q->table.num_actions() : 0; }
size_t graql_qtable_goal_reach_count(const graql_qtable* q) { return q ? q->table.goal_reach_count() : 0; }

graql_status graql_qtable_get(const graql_qtable* q, uint32_t state, uint32_t action, double* out) {
  return guarded([&] {
    require(q && out, "null argument");
    require(state < q->table.num_states() && action < q->table.num_actions(), "state or action out of range");
    *out = q->table(state, action);
  });
}

graql_status graql_qtable_describe(const graql_qtable* q, char** out) {
  return guarded([&] {
    require(q && out, "null argument");
    const auto& t = q->table;
    const auto v = t.values();
    double lo = v.empty() ? 0.0 : v[0], hi = lo;
    std::size_t nonzero = 0;
    for (double x : v) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
      nonzero += x != 0.0;
    }
    nlohmann::json j{{"goal", t.goal()},         {"seed", t.seed()},
                     {"episodes", t.episodes()}, {"goal_reach_count", t.goal_reach_count()},
                     {"num_states", t.num_states()}, {"num_actions", t.num_actions()},
                     {"min", lo},                {"max", hi},
                     {"nonzero", nonzero}};
    *out = dup_string(j.dump());
  });
}

// --------------------------------------------------------------- theories

namespace {
graql_theory* wrap_theory(graql::DomainTheory theory) {
  auto* t = new graql_theory{std::make_unique<graql::DomainTheory>(std::move(theory)), {}};
  for (std::size_t i = 0; i < t->theory->num_goals(); ++i) t->tables.push_back({t->theory->table(i)});
  return t;
}
}  // namespace

graql_status graql_theory_build(const graql_env* env, const char* const* goals, size_t num_goals,
                                const char* learn_json, unsigned threads, graql_theory** out) {
  return guarded([&] {
    require(env && goals && out, "null argument");
    std::vector<std::string> descriptors;
    for (size_t i = 0; i < num_goals; ++i) {
      require(goals[i] != nullptr, "null goal descriptor");
      descriptors.emplace_back(goals[i]);
    }
    *out = wrap_theory(graql::build_theory(env->env, descriptors, learn_config(learn_json), threads));
  });
}

graql_status graql_theory_save(const graql_theory* t, const char* dir, int binary) {
  return guarded([&] {
    require(t && dir, "null argument");
    t->theory->save(dir, binary != 0);
  });
}

graql_status graql_theory_load(const char* dir, graql_theory** out) {
  return guarded([&] {
    require(dir && out, "null argument");
    *out = wrap_theory(graql::DomainTheory::load(dir));
  });
}

void graql_theory_free(graql_theory* t) { delete t; }
size_t graql_theory_num_goals(const graql_theory* t) { return t ? t->theory->num_goals() : 0; }

graql_status graql_theory_goal(const graql_theory* t, size_t index, char** out) {
  return guarded([&] {
    require(t && out, "null argument");
    require(index < t->theory->num_goals(), "goal index out of range");
    *out = dup_string(t->theory->goal(index).descriptor());
  });
}

const graql_qtable* graql_theory_table(const graql_theory* t, size_t index) {
  if (!t || index >= t->tables.size()) return nullptr;
  return &t->tables[index];
}

// -------------------------------------------------------------- inference

graql_status graql_infer(const graql_theory* t, const char* obs_text, const char* measure, double delta,
                         int single_goal, int normalized, graql_result** out) {
  return guarded([&] {
    require(t && obs_text && measure && out, "null argument");
    const auto obs = graql::parse_observations(t->theory->env(), obs_text);
    const graql::MeasureSpec spec{graql::parse_measure(measure), delta};
    const graql::InferOptions opts{single_goal != 0, normalized != 0};
    *out = new graql_result{graql::infer(*t->theory, obs, spec, opts)};
  });
}

void graql_result_free(graql_result* r) { delete r; }
size_t graql_result_num_goals(const graql_result* r) { return r ? r->result.distances.size() : 0; }
double graql_result_distance(const graql_result* r, size_t goal) {
  return r && goal < r->result.distances.size() ? r->result.distances[goal] : 0.0;
}
size_t graql_result_num_predicted(const graql_result* r) { return r ? r->result.predicted.size() : 0; }
size_t graql_result_predicted(const graql_result* r, size_t i) {
  return r && i < r->result.predicted.size() ? r->result.predicted[i] : SIZE_MAX;
}

// ----------------------------------------------------------------- suites

graql_status graql_suite_generate(const char* options_json, graql_suite** out) {
  return guarded([&] {
    require(out, "null argument");
    *out = new graql_suite{graql::generate_suite(graql::SuiteOptions::from_json(parse_json(options_json)))};
  });
}

graql_status graql_suite_load(const char* path, graql_suite** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new graql_suite{graql::ProblemSuite::load(path)};
  });
}

graql_status graql_suite_save(const graql_suite* s, const char* path) {
  return guarded([&] {
    require(s && path, "null argument");
    s->suite.save(path);
  });
}

graql_status graql_suite_to_json(const graql_suite* s, char** out) {
  return guarded([&] {
    require(s && out, "null argument");
    *out = dup_string(s->suite.to_json().dump(2));
  });
}

void graql_suite_free(graql_suite* s) { delete s; }
size_t graql_suite_num_problems(const graql_suite* s) { return s ? s->suite.problems.size() : 0; }

graql_status graql_suite_problem(const graql_suite* s, size_t index, char** out) {
  return guarded([&] {
    require(s && out, "null argument");
    require(index < s->suite.problems.size(), "problem index out of range");
    *out = dup_string(s->suite.to_json().at("problems").at(index).dump());
  });
}

// ------------------------------------------------------------ experiments

graql_status graql_experiment_run(const graql_suite* const* suites, size_t num_suites, const char* run_json,
                                  graql_report** out) {
  return guarded([&] {
    require(suites && out, "null argument");
    auto cfg = graql::RunConfig::from_json(parse_json(run_json));
    for (size_t i = 0; i < num_suites; ++i) {
      require(suites[i] != nullptr, "null suite");
      cfg.suites.push_back(suites[i]->suite);
    }
    *out = new graql_report{graql::run_experiment(cfg)};
  });
}

graql_status graql_report_load(const char* json_path, graql_report** out) {
  return guarded([&] {
    require(json_path && out, "null argument");
    std::ifstream in(json_path);
    if (!in) graql::fail(graql::ErrorCode::Io, std::string("cannot open ") + json_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      graql::fail(graql::ErrorCode::Parse, std::string(json_path) + ": " + e.what());
    }
    *out = new graql_report{graql::report_from_json(j)};
  });
}

graql_status graql_report_write(const graql_report* r, const char* dir, unsigned formats) {
  return guarded([&] {
    require(r && dir, "null argument");
    require(formats >= 1 && formats <= 3, "formats must be 1, 2 or 3");
    graql::emit_report(r->report, dir, formats);
  });
}

graql_status graql_report_csv(const graql_report* r, char** out) {
  return guarded([&] {
    require(r && out, "null argument");
    *out = dup_string(graql::report_csv(r->report));
  });
}

graql_status graql_report_json(const graql_report* r, char** out) {
  return guarded([&] {
    require(r && out, "null argument");
    *out = dup_string(graql::report_json(r->report).dump(2) + "\n");
  });
}

graql_status graql_report_table(const graql_report* r, char** out) {
  return guarded([&] {
    require(r && out, "null argument");
    *out = dup_string(graql::report_table(r->report));
  });
}

size_t graql_report_failed_cells(const graql_report* r) { return r ? r->report.failed_cells() : 0; }
void graql_report_free(graql_report* r) { delete r; }

}  // extern "C"
