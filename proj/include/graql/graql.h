#ifndef GRAQL_H
#define GRAQL_H

#include <stddef.h>
#include <stdint.h>

#if defined(GRAQL_BUILDING_LIBRARY)
#define GRAQL_API __attribute__((visibility("default")))
#else
#define GRAQL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum graql_status {
  GRAQL_OK = 0,
  GRAQL_INVALID_ARGUMENT = 1,
  GRAQL_CAPACITY = 2,
  GRAQL_NO_PATH = 3,
  GRAQL_INFEASIBLE = 4,
  GRAQL_CONTRACT = 5,
  GRAQL_IO = 6,
  GRAQL_PARSE = 7,
  GRAQL_INTERNAL = 99
} graql_status;

typedef struct graql_env graql_env;
typedef struct graql_qtable graql_qtable;
typedef struct graql_theory graql_theory;
typedef struct graql_result graql_result;
typedef struct graql_suite graql_suite;
typedef struct graql_report graql_report;

/* Message of the last failed call on this thread; empty after a success. */
GRAQL_API const char* graql_last_error(void);
GRAQL_API const char* graql_status_name(graql_status status);
/* Releases strings returned through char** out-parameters. */
GRAQL_API void graql_string_free(char* s);

/* Environments. `config_json` uses the keys domain, width, height, obstacles,
   blocks, discs, start, state_cap. */
GRAQL_API graql_status graql_env_create(const char* config_json, graql_env** out);
GRAQL_API void graql_env_free(graql_env* env);
GRAQL_API size_t graql_env_num_states(const graql_env* env);
GRAQL_API size_t graql_env_num_actions(const graql_env* env);
GRAQL_API uint32_t graql_env_initial_state(const graql_env* env);
GRAQL_API graql_status graql_env_step(const graql_env* env, uint32_t state, uint32_t action, uint32_t* out);
GRAQL_API graql_status graql_env_state_name(const graql_env* env, uint32_t state, char** out);
GRAQL_API graql_status graql_env_state_id(const graql_env* env, const char* name, uint32_t* out);
GRAQL_API graql_status graql_env_action_name(const graql_env* env, uint32_t action, char** out);
GRAQL_API graql_status graql_env_action_id(const graql_env* env, const char* name, uint32_t* out);
/* Number of states satisfying a goal descriptor (0 when unreachable). */
GRAQL_API graql_status graql_env_goal_size(const graql_env* env, const char* goal, size_t* out);

/* Q-tables. `learn_json` uses the keys episodes, max_steps, alpha, gamma,
   goal_reward, epsilon_start, epsilon_end, seed, shaping; NULL selects defaults. */
GRAQL_API graql_status graql_qtable_learn(const graql_env* env, const char* goal, const char* learn_json,
                                          graql_qtable** out);
GRAQL_API graql_status graql_qtable_load(const char* path, graql_qtable** out);
GRAQL_API graql_status graql_qtable_save(const graql_qtable* q, const char* path);
GRAQL_API void graql_qtable_free(graql_qtable* q);
GRAQL_API size_t graql_qtable_num_states(const graql_qtable* q);
GRAQL_API size_t graql_qtable_num_actions(const graql_qtable* q);
GRAQL_API graql_status graql_qtable_get(const graql_qtable* q, uint32_t state, uint32_t action, double* out);
GRAQL_API size_t graql_qtable_goal_reach_count(const graql_qtable* q);
/* JSON object with goal, seed, episodes, goal_reach_count, num_states, num_actions,
   min, max, nonzero. */
GRAQL_API graql_status graql_qtable_describe(const graql_qtable* q, char** out);

/* Domain theories: one table per goal. */
GRAQL_API graql_status graql_theory_build(const graql_env* env, const char* const* goals, size_t num_goals,
                                          const char* learn_json, unsigned threads, graql_theory** out);
GRAQL_API graql_status graql_theory_save(const graql_theory* t, const char* dir, int binary);
GRAQL_API graql_status graql_theory_load(const char* dir, graql_theory** out);
GRAQL_API void graql_theory_free(graql_theory* t);
GRAQL_API size_t graql_theory_num_goals(const graql_theory* t);
GRAQL_API graql_status graql_theory_goal(const graql_theory* t, size_t index, char** out);
/* Borrowed table of goal `index`, valid while the theory lives. */
GRAQL_API const graql_qtable* graql_theory_table(const graql_theory* t, size_t index);

/* Inference. `measure` is maxutil, kl or dp; `obs_text` uses the observation
   text format. `single_goal` and `normalized` mirror the library options. */
GRAQL_API graql_status graql_infer(const graql_theory* t, const char* obs_text, const char* measure, double delta,
                                   int single_goal, int normalized, graql_result** out);
GRAQL_API void graql_result_free(graql_result* r);
GRAQL_API size_t graql_result_num_goals(const graql_result* r);
GRAQL_API double graql_result_distance(const graql_result* r, size_t goal);
GRAQL_API size_t graql_result_num_predicted(const graql_result* r);
GRAQL_API size_t graql_result_predicted(const graql_result* r, size_t i);

/* Problem suites. `options_json` uses the keys domain, problems, goals, seed,
   grid_size, obstacle_density, blocks, discs, radius, min_length, max_length. */
GRAQL_API graql_status graql_suite_generate(const char* options_json, graql_suite** out);
GRAQL_API graql_status graql_suite_load(const char* path, graql_suite** out);
GRAQL_API graql_status graql_suite_save(const graql_suite* s, const char* path);
GRAQL_API graql_status graql_suite_to_json(const graql_suite* s, char** out);
GRAQL_API void graql_suite_free(graql_suite* s);
GRAQL_API size_t graql_suite_num_problems(const graql_suite* s);
/* JSON object with id, env, goals, true_goal, seed. */
GRAQL_API graql_status graql_suite_problem(const graql_suite* s, size_t index, char** out);

/* Experiments. `run_json` uses the keys measures, variants, learn, delta,
   normalized, single_goal, threads. */
GRAQL_API graql_status graql_experiment_run(const graql_suite* const* suites, size_t num_suites, const char* run_json,
                                            graql_report** out);
GRAQL_API graql_status graql_report_load(const char* json_path, graql_report** out);
/* `formats`: 1 = CSV, 2 = JSON, 3 = both. */
GRAQL_API graql_status graql_report_write(const graql_report* r, const char* dir, unsigned formats);
GRAQL_API graql_status graql_report_csv(const graql_report* r, char** out);
GRAQL_API graql_status graql_report_json(const graql_report* r, char** out);
GRAQL_API graql_status graql_report_table(const graql_report* r, char** out);
GRAQL_API size_t graql_report_failed_cells(const graql_report* r);
GRAQL_API void graql_report_free(graql_report* r);

#ifdef __cplusplus
}
#endif

#endif
