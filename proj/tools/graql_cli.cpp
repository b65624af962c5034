// graql: benchmark harness for goal recognition over learned Q-tables.
// Exit codes: 0 success, 1 some recognition cells failed, 2 configuration or I/O error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "graql/graql.h"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCellFailures = 1;
constexpr int kExitConfig = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(graql_status st, const std::string& context) {
  if (st != GRAQL_OK) throw ConfigError(context + ": " + graql_last_error());
}

std::string take(char* s) {
  std::string out(s ? s : "");
  graql_string_free(s);
  return out;
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle(Handle&& o) noexcept : p(o.p) { o.p = nullptr; }
  ~Handle() { Free(p); }
  T** out() { return &p; }
  T* get() const { return p; }
};
using SuiteHandle = Handle<graql_suite, graql_suite_free>;
using ReportHandle = Handle<graql_report, graql_report_free>;
using TheoryHandle = Handle<graql_theory, graql_theory_free>;
using EnvHandle = Handle<graql_env, graql_env_free>;
using QTableHandle = Handle<graql_qtable, graql_qtable_free>;
using ResultHandle = Handle<graql_result, graql_result_free>;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Settings shared by every subcommand. A --config file supplies defaults with the
// same key names as the long flags; flags given on the command line win.
struct Settings {
  std::string config;
  std::vector<std::string> domains{"grid", "blocks", "hanoi"};
  std::uint64_t seed = 0;
  std::size_t episodes = 500;
  std::vector<std::string> measures;
  std::vector<std::string> variants;
  std::string out;
  std::vector<std::string> formats{"csv", "json"};
  std::vector<std::string> suites;
  std::size_t problems = 10;
  std::size_t goals = 4;
  unsigned threads = 1;
  double delta = 0.1;
  bool shaping = false;
  bool normalized = false;
  bool single_goal = false;
  json suite_overrides = json::object();
};

void load_config(Settings& s, const json& j) {
  try {
    auto list = [](const json& v) {
      return v.is_array() ? v.get<std::vector<std::string>>() : split_list(v.get<std::string>());
    };
    if (j.contains("domain")) s.domains = list(j.at("domain"));
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("episodes")) s.episodes = j.at("episodes").get<std::size_t>();
    if (j.contains("measure")) s.measures = list(j.at("measure"));
    if (j.contains("variants")) s.variants = list(j.at("variants"));
    if (j.contains("out")) s.out = j.at("out").get<std::string>();
    if (j.contains("format")) s.formats = list(j.at("format"));
    if (j.contains("suite")) s.suites = list(j.at("suite"));
    if (j.contains("problems")) s.problems = j.at("problems").get<std::size_t>();
    if (j.contains("goals")) s.goals = j.at("goals").get<std::size_t>();
    if (j.contains("threads")) s.threads = j.at("threads").get<unsigned>();
    if (j.contains("delta")) s.delta = j.at("delta").get<double>();
    if (j.contains("shaping")) s.shaping = j.at("shaping").get<bool>();
    if (j.contains("normalized")) s.normalized = j.at("normalized").get<bool>();
    if (j.contains("single_goal")) s.single_goal = j.at("single_goal").get<bool>();
    for (const char* key : {"grid_size", "obstacle_density", "blocks", "discs", "radius", "min_length", "max_length"}) {
      if (j.contains(key)) s.suite_overrides[key] = j.at(key);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

json learn_json(const Settings& s, std::uint64_t seed) {
  return {{"episodes", s.episodes}, {"seed", seed}, {"shaping", s.shaping}};
}

unsigned format_mask(const Settings& s) {
  unsigned mask = 0;
  for (const auto& f : s.formats) {
    if (f == "csv") mask |= 1;
    else if (f == "json") mask |= 2;
    else throw ConfigError("unknown format '" + f + "' (expected csv, json)");
  }
  if (mask == 0) throw ConfigError("no output format selected");
  return mask;
}

SuiteHandle make_suite(const Settings& s, const std::string& domain) {
  json opts = s.suite_overrides;
  opts["domain"] = domain;
  opts["problems"] = s.problems;
  opts["goals"] = s.goals;
  opts["seed"] = s.seed;
  SuiteHandle h;
  check(graql_suite_generate(opts.dump().c_str(), h.out()), "generating " + domain + " suite");
  return h;
}

std::vector<SuiteHandle> resolve_suites(const Settings& s) {
  std::vector<SuiteHandle> out;
  if (!s.suites.empty()) {
    for (const auto& path : s.suites) {
      SuiteHandle h;
      check(graql_suite_load(path.c_str(), h.out()), "loading " + path);
      out.push_back(std::move(h));
    }
  } else {
    for (const auto& d : s.domains) out.push_back(make_suite(s, d));
  }
  return out;
}

int cmd_gen_suite(const Settings& s) {
  if (s.out.empty()) throw ConfigError("gen-suite needs --out");
  if (s.domains.size() == 1) {
    auto suite = make_suite(s, s.domains.front());
    check(graql_suite_save(suite.get(), s.out.c_str()), "writing " + s.out);
    std::printf("%s: %zu problems\n", s.out.c_str(), graql_suite_num_problems(suite.get()));
    return kExitOk;
  }
  // Several domains: --out names a directory holding one <domain>.json per suite.
  std::error_code ec;
  std::filesystem::create_directories(s.out, ec);
  if (ec) throw ConfigError("cannot create " + s.out + ": " + ec.message());
  for (const auto& d : s.domains) {
    auto suite = make_suite(s, d);
    const std::string path = (std::filesystem::path(s.out) / (d + ".json")).string();
    check(graql_suite_save(suite.get(), path.c_str()), "writing " + path);
    std::printf("%s: %zu problems\n", path.c_str(), graql_suite_num_problems(suite.get()));
  }
  return kExitOk;
}

int cmd_train(const Settings& s, const std::string& problem, bool binary) {
  if (s.out.empty()) throw ConfigError("train needs --out");
  auto suites = resolve_suites(s);
  std::size_t trained = 0;
  for (const auto& suite : suites) {
    for (std::size_t i = 0; i < graql_suite_num_problems(suite.get()); ++i) {
      const json p = json::parse(take([&] {
        char* text = nullptr;
        check(graql_suite_problem(suite.get(), i, &text), "reading suite");
        return text;
      }()));
      const std::string id = p.at("id").get<std::string>();
      if (!problem.empty() && problem != id) continue;

      EnvHandle env;
      check(graql_env_create(p.at("env").dump().c_str(), env.out()), id);
      const auto goals = p.at("goals").get<std::vector<std::string>>();
      std::vector<const char*> ptrs;
      for (const auto& g : goals) ptrs.push_back(g.c_str());
      TheoryHandle theory;
      const std::string learn = learn_json(s, p.at("seed").get<std::uint64_t>()).dump();
      check(graql_theory_build(env.get(), ptrs.data(), ptrs.size(), learn.c_str(), s.threads, theory.out()), id);
      const std::string dir = (std::filesystem::path(s.out) / id).string();
      check(graql_theory_save(theory.get(), dir.c_str(), binary ? 1 : 0), "writing " + dir);
      std::printf("%s: %zu goals -> %s\n", id.c_str(), goals.size(), dir.c_str());
      ++trained;
    }
  }
  if (trained == 0) throw ConfigError("no problem matched '" + problem + "'");
  return kExitOk;
}

int cmd_run(const Settings& s) {
  if (s.out.empty()) throw ConfigError("run needs --out");
  const unsigned mask = format_mask(s);
  auto suites = resolve_suites(s);
  json run{{"learn", learn_json(s, 0)},
           {"delta", s.delta},
           {"normalized", s.normalized},
           {"single_goal", s.single_goal},
           {"threads", s.threads}};
  if (!s.measures.empty()) run["measures"] = s.measures;
  if (!s.variants.empty()) run["variants"] = s.variants;

  std::vector<const graql_suite*> ptrs;
  for (const auto& h : suites) ptrs.push_back(h.get());
  ReportHandle report;
  check(graql_experiment_run(ptrs.data(), ptrs.size(), run.dump().c_str(), report.out()), "run");
  check(graql_report_write(report.get(), s.out.c_str(), mask), "writing report");

  char* table = nullptr;
  check(graql_report_table(report.get(), &table), "formatting report");
  std::fputs(take(table).c_str(), stdout);
  const std::size_t failed = graql_report_failed_cells(report.get());
  if (failed > 0) {
    std::fprintf(stderr, "%zu problem-cells failed; see report.json for details\n", failed);
    return kExitCellFailures;
  }
  return kExitOk;
}

int cmd_report(const std::string& input, const std::string& format) {
  ReportHandle report;
  check(graql_report_load(input.c_str(), report.out()), "loading " + input);
  char* text = nullptr;
  if (format == "table") check(graql_report_table(report.get(), &text), "formatting");
  else if (format == "csv") check(graql_report_csv(report.get(), &text), "formatting");
  else if (format == "json") check(graql_report_json(report.get(), &text), "formatting");
  else throw ConfigError("unknown report format '" + format + "' (expected table, csv, json)");
  std::fputs(take(text).c_str(), stdout);
  return graql_report_failed_cells(report.get()) > 0 ? kExitCellFailures : kExitOk;
}

int cmd_inspect(const std::string& path, const std::string& env_path, const std::string& state) {
  QTableHandle q;
  check(graql_qtable_load(path.c_str(), q.out()), "loading " + path);
  char* text = nullptr;
  check(graql_qtable_describe(q.get(), &text), "describing");
  const json info = json::parse(take(text));
  std::printf("goal:        %s\n", info.at("goal").get<std::string>().c_str());
  std::printf("size:        %zu states x %zu actions\n", info.at("num_states").get<std::size_t>(),
              info.at("num_actions").get<std::size_t>());
  std::printf("training:    %zu episodes, seed %llu, goal reached %zu times\n", info.at("episodes").get<std::size_t>(),
              static_cast<unsigned long long>(info.at("seed").get<std::uint64_t>()),
              info.at("goal_reach_count").get<std::size_t>());
  std::printf("values:      min %.6g, max %.6g, %zu nonzero\n", info.at("min").get<double>(),
              info.at("max").get<double>(), info.at("nonzero").get<std::size_t>());
  if (state.empty()) return kExitOk;
  if (env_path.empty()) throw ConfigError("--state needs --env");
  EnvHandle env;
  check(graql_env_create(read_file(env_path).c_str(), env.out()), "loading " + env_path);
  if (graql_env_num_states(env.get()) != graql_qtable_num_states(q.get()) ||
      graql_env_num_actions(env.get()) != graql_qtable_num_actions(q.get())) {
    throw ConfigError("environment does not match the table dimensions");
  }
  std::uint32_t sid = 0;
  check(graql_env_state_id(env.get(), state.c_str(), &sid), "state");
  for (std::uint32_t a = 0; a < graql_qtable_num_actions(q.get()); ++a) {
    char* name = nullptr;
    check(graql_env_action_name(env.get(), a, &name), "action");
    double v = 0;
    check(graql_qtable_get(q.get(), sid, a, &v), "value");
    std::printf("  %-14s %.6f\n", take(name).c_str(), v);
  }
  return kExitOk;
}

int cmd_infer(const Settings& s, const std::string& theory_dir, const std::string& obs_path) {
  TheoryHandle theory;
  check(graql_theory_load(theory_dir.c_str(), theory.out()), "loading " + theory_dir);
  const std::string obs = read_file(obs_path);
  const std::vector<std::string> measures = s.measures.empty() ? std::vector<std::string>{"maxutil"} : s.measures;
  for (const auto& m : measures) {
    ResultHandle r;
    check(graql_infer(theory.get(), obs.c_str(), m.c_str(), s.delta, s.single_goal, s.normalized, r.out()),
          "inferring with " + m);
    std::printf("%s:\n", m.c_str());
    for (std::size_t g = 0; g < graql_result_num_goals(r.get()); ++g) {
      bool predicted = false;
      for (std::size_t i = 0; i < graql_result_num_predicted(r.get()); ++i)
        predicted |= graql_result_predicted(r.get(), i) == g;
      char* name = nullptr;
      check(graql_theory_goal(theory.get(), g, &name), "goal");
      std::printf("  %c %-28s %.6f\n", predicted ? '*' : ' ', take(name).c_str(), graql_result_distance(r.get(), g));
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Goal recognition as Q-learning: suite generation, training, and benchmark sweeps"};
  app.require_subcommand(1);

  Settings s;
  std::string domain_flag, measure_flag, variants_flag, format_flag;
  std::vector<std::string> suite_flags;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", s.config, "JSON file providing defaults for any flag");
    sub->add_option("--domain", domain_flag, "Comma-separated domains: grid, blocks, hanoi");
    sub->add_option("--seed", s.seed, "Suite seed");
    sub->add_option("--episodes", s.episodes, "Training episodes per goal");
    sub->add_option("--out", s.out, "Output path");
    sub->add_option("--problems", s.problems, "Problems per suite");
    sub->add_option("--goals", s.goals, "Candidate goals per problem");
    sub->add_option("--threads", s.threads, "Worker threads");
    sub->add_flag("--shaping", s.shaping, "Initialize tables from one optimal trajectory");
  };

  auto* gen = app.add_subcommand("gen-suite", "Generate a seeded problem suite");
  add_common(gen);

  auto* train = app.add_subcommand("train", "Train and save the Q-tables of suite problems");
  add_common(train);
  std::string problem;
  bool binary = false;
  train->add_option("--suite", suite_flags, "Suite file(s); generated from --domain/--seed when omitted");
  train->add_option("--problem", problem, "Only train this problem id");
  train->add_flag("--binary", binary, "Write .qbin tables");

  auto* run = app.add_subcommand("run", "Train, infer and score every variant x measure cell");
  add_common(run);
  run->add_option("--suite", suite_flags, "Suite file(s); generated from --domain/--seed when omitted");
  run->add_option("--measure", measure_flag, "Comma-separated: maxutil, kl, dp, maxutil-states, maxutil-actions");
  run->add_option("--variants", variants_flag, "Comma-separated variants, e.g. 10,30,50,70,100,50n,100n");
  run->add_option("--format", format_flag, "Comma-separated: csv, json");
  run->add_option("--delta", s.delta, "Divergence threshold for dp");
  run->add_flag("--normalized", s.normalized, "Normalize state-only and action-only utilities per observation");
  run->add_flag("--single-goal", s.single_goal, "Keep only one minimizing goal");

  auto* report = app.add_subcommand("report", "Print a saved report.json");
  std::string report_in, report_format = "table";
  report->add_option("input", report_in, "report.json")->required();
  report->add_option("--format", report_format, "table, csv or json");

  auto* inspect = app.add_subcommand("inspect-qtable", "Summarize a saved Q-table");
  std::string qtable_path, env_path, state;
  inspect->add_option("file", qtable_path, "Q-table file (.qtable or .qbin)")->required();
  inspect->add_option("--env", env_path, "Environment JSON, required with --state");
  inspect->add_option("--state", state, "Print the action values of this state");

  auto* infer = app.add_subcommand("infer", "Rank the goals of a trained theory against an observation file");
  std::string theory_dir, obs_path;
  infer->add_option("theory", theory_dir, "Directory written by train")->required();
  infer->add_option("observations", obs_path, "Observation text file")->required();
  infer->add_option("--measure", measure_flag, "Comma-separated measures");
  infer->add_option("--delta", s.delta, "Divergence threshold for dp");
  infer->add_flag("--normalized", s.normalized, "Normalize state-only and action-only utilities");
  infer->add_flag("--single-goal", s.single_goal, "Keep only one minimizing goal");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    // Re-apply command-line values on top of the config file.
    CLI::App* sub = app.get_subcommands().front();
    if (sub->get_option_no_throw("--config") && !s.config.empty()) {
      Settings flags = s;
      load_config(s, read_json(s.config));
      for (const char* name : {"--seed", "--episodes", "--out", "--problems", "--goals", "--threads", "--delta"}) {
        auto* opt = sub->get_option_no_throw(name);
        if (!opt || opt->count() == 0) continue;
        const std::string n = name;
        if (n == "--seed") s.seed = flags.seed;
        else if (n == "--episodes") s.episodes = flags.episodes;
        else if (n == "--out") s.out = flags.out;
        else if (n == "--problems") s.problems = flags.problems;
        else if (n == "--goals") s.goals = flags.goals;
        else if (n == "--threads") s.threads = flags.threads;
        else if (n == "--delta") s.delta = flags.delta;
      }
      s.shaping |= flags.shaping;
      s.normalized |= flags.normalized;
      s.single_goal |= flags.single_goal;
    }
    if (!domain_flag.empty()) s.domains = split_list(domain_flag);
    if (!measure_flag.empty()) s.measures = split_list(measure_flag);
    if (!variants_flag.empty()) s.variants = split_list(variants_flag);
    if (!format_flag.empty()) s.formats = split_list(format_flag);
    if (!suite_flags.empty()) s.suites = suite_flags;

    if (*gen) return cmd_gen_suite(s);
    if (*train) return cmd_train(s, problem, binary);
    if (*run) return cmd_run(s);
    if (*report) return cmd_report(report_in, report_format);
    if (*inspect) return cmd_inspect(qtable_path, env_path, state);
    if (*infer) return cmd_infer(s, theory_dir, obs_path);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "graql: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "graql: %s\n", e.what());
    return kExitConfig;
  }
  return kExitOk;
}
