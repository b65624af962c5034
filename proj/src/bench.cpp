#include "graql/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <thread>

#include "graql/error.hpp"
#include "graql/rng.hpp"

namespace graql {

// ------------------------------------------------------------------ suites

void SuiteOptions::apply_defaults() {
  switch (domain) {
    case DomainKind::Grid:
      if (radius == 0) radius = 4;
      if (min_length == 0) min_length = 6;
      if (max_length == 0) max_length = 18;
      break;
    case DomainKind::Hanoi:
      if (radius == 0) radius = 4;
      if (min_length == 0) min_length = 5;
      if (max_length == 0) max_length = 15;
      break;
    case DomainKind::Blocks:
      if (radius == 0) radius = 4;
      if (min_length == 0) min_length = 5;
      if (max_length == 0) max_length = 12;
      break;
  }
}

nlohmann::json SuiteOptions::to_json() const {
  return {{"domain", std::string(domain_name(domain))},
          {"problems", problems},
          {"goals", goals},
          {"seed", seed},
          {"grid_size", grid_size},
          {"obstacle_density", obstacle_density},
          {"blocks", blocks},
          {"discs", discs},
          {"radius", radius},
          {"min_length", min_length},
          {"max_length", max_length}};
}

SuiteOptions SuiteOptions::from_json(const nlohmann::json& j) {
  SuiteOptions o;
  try {
    if (j.contains("domain")) o.domain = parse_domain(j.at("domain").get<std::string>());
    o.problems = j.value("problems", o.problems);
    o.goals = j.value("goals", o.goals);
    o.seed = j.value("seed", o.seed);
    o.grid_size = j.value("grid_size", o.grid_size);
    o.obstacle_density = j.value("obstacle_density", o.obstacle_density);
    o.blocks = j.value("blocks", o.blocks);
    o.discs = j.value("discs", o.discs);
    o.radius = j.value("radius", o.radius);
    o.min_length = j.value("min_length", o.min_length);
    o.max_length = j.value("max_length", o.max_length);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, std::string("invalid suite options: ") + e.what());
  }
  return o;
}

nlohmann::json ProblemSuite::to_json() const {
  nlohmann::json j;
  j["format"] = "graql-suite";
  j["version"] = 1;
  j["domain"] = std::string(domain_name(domain));
  j["seed"] = seed;
  auto arr = nlohmann::json::array();
  for (const auto& p : problems) {
    arr.push_back({{"id", p.id}, {"env", p.env.to_json()}, {"goals", p.goals}, {"true_goal", p.true_goal}, {"seed", p.seed}});
  }
  j["problems"] = arr;
  return j;
}

ProblemSuite ProblemSuite::from_json(const nlohmann::json& j) {
  ProblemSuite s;
  try {
    if (j.value("format", "") != "graql-suite") fail(ErrorCode::Parse, "not a graql suite document");
    s.domain = parse_domain(j.at("domain").get<std::string>());
    s.seed = j.value("seed", std::uint64_t{0});
    for (const auto& p : j.at("problems")) {
      GrProblem prob;
      prob.id = p.at("id").get<std::string>();
      prob.env = EnvConfig::from_json(p.at("env"));
      prob.goals = p.at("goals").get<std::vector<std::string>>();
      prob.true_goal = p.at("true_goal").get<std::size_t>();
      prob.seed = p.at("seed").get<std::uint64_t>();
      if (prob.true_goal >= prob.goals.size()) fail(ErrorCode::Parse, "true goal out of range in " + prob.id);
      s.problems.push_back(std::move(prob));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, std::string("invalid suite: ") + e.what());
  }
  return s;
}

void ProblemSuite::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
  out << to_json().dump(2) << '\n';
  if (!out) fail(ErrorCode::Io, "failed writing " + path.string());
}

ProblemSuite ProblemSuite::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, path.string() + ": " + e.what());
  }
  return from_json(j);
}

namespace {

std::vector<int> distances_from(const Environment& env, StateId from) {
  std::vector<int> dist(env.num_states(), -1);
  std::vector<StateId> queue{from};
  dist[from] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const StateId s = queue[head];
    for (ActionId a = 0; a < env.num_actions(); ++a) {
      const StateId t = env.step(s, a);
      if (dist[t] < 0) {
        dist[t] = dist[s] + 1;
        queue.push_back(t);
      }
    }
  }
  return dist;
}

// Blocks goals are hand-empty configurations, as in the usual benchmark problems.
bool goal_eligible(const Environment& env, StateId s) {
  if (env.kind() != DomainKind::Blocks) return true;
  return env.state_name(s).find('h') == std::string::npos;
}

std::string goal_descriptor(const Environment& env, StateId s) {
  if (env.kind() == DomainKind::Grid) {
    const Cell c = env.cell_of(s);
    return "at(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
  }
  return "state(" + env.state_name(s) + ")";
}

EnvConfig base_config(const SuiteOptions& o, Rng& rng) {
  EnvConfig cfg;
  cfg.kind = o.domain;
  switch (o.domain) {
    case DomainKind::Grid: {
      cfg.width = cfg.height = o.grid_size;
      for (int y = 0; y < o.grid_size; ++y)
        for (int x = 0; x < o.grid_size; ++x)
          if (rng.uniform() < o.obstacle_density) cfg.obstacles.push_back({x, y});
      break;
    }
    case DomainKind::Blocks: cfg.blocks = o.blocks; break;
    case DomainKind::Hanoi: cfg.discs = o.discs; break;
  }
  return cfg;
}

// True when `a` lies on some optimal path from the start to `b`. An optimal plan for
// `a` is then a prefix of one for `b`, and no observation of it can separate them.
bool nested(const std::vector<int>& from_start, StateId a, StateId b, int a_to_b) {
  return from_start[a] + a_to_b == from_start[b];
}

// Picks `goals` mutually non-nested states pairwise within `radius` whose cluster anchor lies at a
// plan length in [min_length, max_length] from the start.
std::optional<std::vector<StateId>> pick_goals(const Environment& env, const SuiteOptions& o, Rng& rng) {
  const auto from_start = distances_from(env, env.initial_state());
  std::vector<StateId> anchors;
  for (StateId s = 0; s < env.num_states(); ++s) {
    if (from_start[s] >= o.min_length && from_start[s] <= o.max_length && goal_eligible(env, s)) anchors.push_back(s);
  }
  rng.shuffle(anchors);
  constexpr std::size_t kMaxAnchors = 64;
  for (std::size_t k = 0; k < anchors.size() && k < kMaxAnchors; ++k) {
    const StateId anchor = anchors[k];
    std::vector<StateId> chosen{anchor};
    std::vector<std::vector<int>> dists{distances_from(env, anchor)};
    std::vector<StateId> pool;
    for (StateId s = 0; s < env.num_states(); ++s) {
      if (s == anchor || s == env.initial_state() || !goal_eligible(env, s)) continue;
      if (dists[0][s] >= 1 && dists[0][s] <= o.radius && from_start[s] >= 1) pool.push_back(s);
    }
    rng.shuffle(pool);
    for (StateId s : pool) {
      if (chosen.size() == o.goals) break;
      auto ds = distances_from(env, s);
      bool ok = true;
      for (std::size_t i = 0; i < chosen.size() && ok; ++i) {
        ok = dists[i][s] >= 1 && dists[i][s] <= o.radius && ds[chosen[i]] >= 1 && ds[chosen[i]] <= o.radius &&
             !nested(from_start, chosen[i], s, dists[i][s]) && !nested(from_start, s, chosen[i], ds[chosen[i]]);
      }
      if (ok) {
        chosen.push_back(s);
        dists.push_back(std::move(ds));
      }
    }
    if (chosen.size() == o.goals) return chosen;
  }
  return std::nullopt;
}

}  // namespace

ProblemSuite generate_suite(const SuiteOptions& options) {
  SuiteOptions o = options;
  o.apply_defaults();
  if (o.problems < 1) fail(ErrorCode::InvalidArgument, "a suite needs at least one problem");
  if (o.goals < 2) fail(ErrorCode::InvalidArgument, "a problem needs at least two candidate goals");
  if (o.min_length < 1 || o.max_length < o.min_length || o.radius < 1) {
    fail(ErrorCode::InvalidArgument, "invalid goal length range or radius");
  }
  if (o.domain == DomainKind::Grid && !(o.obstacle_density >= 0.0 && o.obstacle_density < 1.0)) {
    fail(ErrorCode::InvalidArgument, "obstacle density must be in [0,1)");
  }

  ProblemSuite suite;
  suite.domain = o.domain;
  suite.seed = o.seed;
  for (std::size_t p = 0; p < o.problems; ++p) {
    Rng rng(derive_seed(o.seed, p));
    bool placed = false;
    constexpr int kAttempts = 50;
    for (int attempt = 0; attempt < kAttempts && !placed; ++attempt) {
      EnvConfig cfg = base_config(o, rng);
      // Pick a start among the free states of the default-start component.
      std::unique_ptr<Environment> probe;
      if (cfg.kind == DomainKind::Grid) {
        std::vector<Cell> free;
        for (int y = 0; y < cfg.height; ++y)
          for (int x = 0; x < cfg.width; ++x)
            if (std::find(cfg.obstacles.begin(), cfg.obstacles.end(), Cell{x, y}) == cfg.obstacles.end())
              free.push_back({x, y});
        if (free.empty()) continue;
        const Cell start = free[rng.index(free.size())];
        cfg.start = std::to_string(start.x) + "," + std::to_string(start.y);
        probe = std::make_unique<Environment>(cfg);
      } else {
        const Environment full(cfg);
        std::vector<StateId> starts;
        for (StateId s = 0; s < full.num_states(); ++s)
          if (goal_eligible(full, s)) starts.push_back(s);
        cfg.start = full.state_name(starts[rng.index(starts.size())]);
        probe = std::make_unique<Environment>(cfg);
      }
      if (probe->num_states() < o.goals + 1) continue;
      auto goals = pick_goals(*probe, o, rng);
      if (!goals) continue;

      GrProblem prob;
      char id[32];
      std::snprintf(id, sizeof id, "%s-%02zu", std::string(domain_name(o.domain)).c_str(), p);
      prob.id = id;
      prob.env = probe->config();
      for (StateId g : *goals) prob.goals.push_back(goal_descriptor(*probe, g));
      prob.true_goal = rng.index(prob.goals.size());
      prob.seed = derive_seed(o.seed, 1'000'000 + p) & 0xffffffffULL;
      suite.problems.push_back(std::move(prob));
      placed = true;
    }
    if (!placed) {
      fail(ErrorCode::Capacity, "domain too small to host " + std::to_string(o.goals) +
                                    " goals within radius " + std::to_string(o.radius) + " at plan length " +
                                    std::to_string(o.min_length) + ".." + std::to_string(o.max_length));
    }
  }
  return suite;
}

// ------------------------------------------------------------- experiment

MeasureChoice MeasureChoice::parse(std::string_view name) {
  if (name == "maxutil") return {"maxutil", MeasureKind::MaxUtil, ObsFlavor::StateAction};
  if (name == "kl") return {"kl", MeasureKind::KL, ObsFlavor::StateAction};
  if (name == "dp") return {"dp", MeasureKind::DP, ObsFlavor::StateAction};
  if (name == "maxutil-states") return {"maxutil-states", MeasureKind::MaxUtil, ObsFlavor::StateOnly};
  if (name == "maxutil-actions") return {"maxutil-actions", MeasureKind::MaxUtil, ObsFlavor::ActionOnly};
  fail(ErrorCode::InvalidArgument, "unknown measure '" + std::string(name) +
                                       "' (expected maxutil, kl, dp, maxutil-states, maxutil-actions)");
}

std::vector<MeasureChoice> MeasureChoice::defaults() {
  return {parse("maxutil"), parse("kl"), parse("dp"), parse("maxutil-states"), parse("maxutil-actions")};
}

void RunConfig::validate() const {
  if (suites.empty()) fail(ErrorCode::InvalidArgument, "run needs at least one suite");
  if (measures.empty()) fail(ErrorCode::InvalidArgument, "run needs at least one measure");
  if (variants.empty()) fail(ErrorCode::InvalidArgument, "run needs at least one variant");
  for (const auto& v : variants) v.validate();
  if (!(delta > 0.0 && delta < 1.0)) fail(ErrorCode::InvalidArgument, "DP threshold must be in (0,1)");
  learn.validate();
}

nlohmann::json RunConfig::to_json() const {
  auto ms = nlohmann::json::array();
  for (const auto& m : measures) ms.push_back(m.name);
  auto vs = nlohmann::json::array();
  for (const auto& v : variants) vs.push_back(v.label());
  return {{"measures", ms},        {"variants", vs},       {"learn", learn.to_json()}, {"delta", delta},
          {"normalized", normalized}, {"single_goal", single_goal}, {"threads", threads}};
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig cfg;
  try {
    if (!j.is_object()) fail(ErrorCode::Parse, "run config must be a JSON object");
    if (j.contains("measures")) {
      cfg.measures.clear();
      for (const auto& m : j.at("measures")) cfg.measures.push_back(MeasureChoice::parse(m.get<std::string>()));
    }
    if (j.contains("variants")) {
      cfg.variants.clear();
      for (const auto& v : j.at("variants")) cfg.variants.push_back(VariantSpec::parse(v.get<std::string>()));
    }
    if (j.contains("learn")) cfg.learn = LearnConfig::from_json(j.at("learn"));
    cfg.delta = j.value("delta", cfg.delta);
    cfg.normalized = j.value("normalized", cfg.normalized);
    cfg.single_goal = j.value("single_goal", cfg.single_goal);
    cfg.threads = j.value("threads", cfg.threads);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, std::string("invalid run config: ") + e.what());
  }
  return cfg;
}

std::size_t BenchmarkReport::failed_cells() const {
  std::size_t n = 0;
  for (const auto& c : cells) n += c.failures;
  return n;
}

const CellReport* BenchmarkReport::find(std::string_view domain, const VariantSpec& variant,
                                        std::string_view measure) const {
  for (const auto& c : cells)
    if (c.domain == domain && c.variant == variant && c.measure == measure) return &c;
  return nullptr;
}

namespace {

struct ProblemRun {
  ProblemInfo info;
  // Indexed [variant][measure].
  std::vector<std::vector<ProblemOutcome>> outcomes;
};

ProblemRun run_problem(const GrProblem& prob, DomainKind domain, const RunConfig& cfg) {
  ProblemRun run;
  run.info.id = prob.id;
  run.info.domain = std::string(domain_name(domain));
  run.info.goals = prob.goals;
  run.info.true_goal = prob.true_goal;
  run.outcomes.assign(cfg.variants.size(), std::vector<ProblemOutcome>(cfg.measures.size()));
  for (auto& row : run.outcomes)
    for (auto& o : row) {
      o.problem_id = prob.id;
      o.true_goal = prob.true_goal;
    }
  auto fail_all = [&](const std::string& why, bool noisy_only) {
    for (std::size_t v = 0; v < cfg.variants.size(); ++v) {
      if (noisy_only && !cfg.variants[v].noise) continue;
      for (auto& o : run.outcomes[v])
        if (o.error.empty()) o.error = why;
    }
  };

  std::shared_ptr<const Environment> env;
  std::unique_ptr<DomainTheory> theory;
  ObservationSequence clean;
  try {
    env = std::make_shared<const Environment>(prob.env);
    run.info.num_states = env->num_states();
    LearnConfig learn = cfg.learn;
    learn.seed = prob.seed;
    theory = std::make_unique<DomainTheory>(build_theory(env, prob.goals, learn));
    for (const auto& w : theory->warnings()) run.info.notes.push_back(w);
    // Observations come from the seeded-random planner; shaping uses the lexicographic one.
    clean = generate_optimal_obs(*env, theory->goal(prob.true_goal), TieRule::SeededRandom, derive_seed(prob.seed, 1));
    clean.problem_id = prob.id;
    run.info.optimal_length = clean.size();
  } catch (const std::exception& e) {
    fail_all(e.what(), false);
    return run;
  }

  std::optional<ObservationSequence> noisy;
  const bool wants_noise = std::any_of(cfg.variants.begin(), cfg.variants.end(), [](const auto& v) { return v.noise; });
  if (wants_noise) {
    try {
      noisy = inject_noise(*env, clean, theory->goal(prob.true_goal), derive_seed(prob.seed, 2));
      run.info.noisy_length = noisy->size();
    } catch (const std::exception& e) {
      fail_all(std::string("noise injection: ") + e.what(), true);
    }
  }

  const InferOptions opts{cfg.single_goal, cfg.normalized};
  for (std::size_t v = 0; v < cfg.variants.size(); ++v) {
    const VariantSpec& variant = cfg.variants[v];
    if (variant.noise && !noisy) continue;
    const ObservationSequence observed = subsample(variant.noise ? *noisy : clean, variant.ratio, derive_seed(prob.seed, 3));
    for (std::size_t m = 0; m < cfg.measures.size(); ++m) {
      ProblemOutcome& out = run.outcomes[v][m];
      try {
        const MeasureChoice& choice = cfg.measures[m];
        const ObservationSequence obs = choice.flavor == ObsFlavor::StateAction ? observed
                                        : choice.flavor == ObsFlavor::StateOnly ? observed.states_only()
                                                                                : observed.actions_only();
        const RecognitionResult result = infer(*theory, obs, MeasureSpec{choice.kind, cfg.delta}, opts);
        out.obs_length = obs.size();
        out.predicted = result.predicted;
        out.distances = result.distances;
        out.counts = score_problem(result, prob.true_goal, theory->num_goals());
      } catch (const std::exception& e) {
        out.error = e.what();
      }
    }
  }
  return run;
}

}  // namespace

BenchmarkReport run_experiment(const RunConfig& cfg) {
  cfg.validate();
  BenchmarkReport report;
  for (const ProblemSuite& suite : cfg.suites) {
    const std::size_t n = suite.problems.size();
    std::vector<ProblemRun> runs(n);
    const unsigned workers = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(n)));
    if (workers == 1) {
      for (std::size_t i = 0; i < n; ++i) runs[i] = run_problem(suite.problems[i], suite.domain, cfg);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          for (std::size_t i = next++; i < n; i = next++) runs[i] = run_problem(suite.problems[i], suite.domain, cfg);
        });
      }
      for (auto& t : pool) t.join();
    }

    for (const auto& r : runs) report.problems.push_back(r.info);
    for (std::size_t v = 0; v < cfg.variants.size(); ++v) {
      for (std::size_t m = 0; m < cfg.measures.size(); ++m) {
        CellReport cell;
        cell.domain = std::string(domain_name(suite.domain));
        cell.variant = cfg.variants[v];
        cell.measure = cfg.measures[m].name;
        ConfusionCounts sum;
        std::size_t scored = 0, top = 0;
        for (const auto& r : runs) {
          const ProblemOutcome& o = r.outcomes[v][m];
          cell.problems.push_back(o);
          if (!o.error.empty()) {
            ++cell.failures;
            continue;
          }
          sum += o.counts;
          ++scored;
          if (o.counts.tp) ++top;
        }
        cell.metrics = summarize(sum);
        cell.top_ranked_ratio = scored ? static_cast<double>(top) / static_cast<double>(scored) : 0.0;
        report.cells.push_back(std::move(cell));
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------- reports

namespace {

std::string fmt(double v, const char* spec = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

nlohmann::json number_or_string(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

double number_from_json(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::string report_csv(const BenchmarkReport& report) {
  std::string out = std::string(kReportCsvHeader) + "\n";
  for (const auto& c : report.cells) {
    out += c.domain + "," + fmt(c.variant.ratio, "%.2f") + "," + (c.variant.noise ? "1" : "0") + "," + c.measure + "," +
           fmt(c.metrics.accuracy) + "," + fmt(c.metrics.precision) + "," + fmt(c.metrics.recall) + "," +
           fmt(c.metrics.fscore) + "\n";
  }
  return out;
}

nlohmann::json report_json(const BenchmarkReport& report) {
  nlohmann::json j;
  j["format"] = "graql-report";
  j["version"] = 1;
  auto problems = nlohmann::json::array();
  for (const auto& p : report.problems) {
    problems.push_back({{"id", p.id},
                        {"domain", p.domain},
                        {"goals", p.goals},
                        {"true_goal", p.true_goal},
                        {"num_states", p.num_states},
                        {"optimal_length", p.optimal_length},
                        {"noisy_length", p.noisy_length},
                        {"notes", p.notes}});
  }
  j["problems"] = problems;
  auto cells = nlohmann::json::array();
  for (const auto& c : report.cells) {
    nlohmann::json cj;
    cj["domain"] = c.domain;
    cj["variant"] = c.variant.label();
    cj["observability"] = c.variant.ratio;
    cj["noise"] = c.variant.noise;
    cj["measure"] = c.measure;
    cj["counts"] = {{"tp", c.metrics.counts.tp}, {"fp", c.metrics.counts.fp}, {"tn", c.metrics.counts.tn},
                    {"fn", c.metrics.counts.fn}};
    cj["accuracy"] = c.metrics.accuracy;
    cj["precision"] = c.metrics.precision;
    cj["recall"] = c.metrics.recall;
    cj["fscore"] = c.metrics.fscore;
    cj["top_ranked_ratio"] = c.top_ranked_ratio;
    cj["failures"] = c.failures;
    auto rows = nlohmann::json::array();
    for (const auto& o : c.problems) {
      nlohmann::json row;
      row["id"] = o.problem_id;
      row["true_goal"] = o.true_goal;
      row["obs_length"] = o.obs_length;
      row["predicted"] = o.predicted;
      auto d = nlohmann::json::array();
      for (double v : o.distances) d.push_back(number_or_string(v));
      row["distances"] = d;
      row["counts"] = {{"tp", o.counts.tp}, {"fp", o.counts.fp}, {"tn", o.counts.tn}, {"fn", o.counts.fn}};
      if (!o.error.empty()) row["error"] = o.error;
      rows.push_back(std::move(row));
    }
    cj["problems"] = rows;
    cells.push_back(std::move(cj));
  }
  j["cells"] = cells;
  return j;
}

BenchmarkReport report_from_json(const nlohmann::json& j) {
  BenchmarkReport r;
  try {
    if (j.value("format", "") != "graql-report") fail(ErrorCode::Parse, "not a graql report document");
    if (j.value("version", 0) != 1) fail(ErrorCode::Parse, "unsupported report version");
    for (const auto& p : j.at("problems")) {
      ProblemInfo info;
      info.id = p.at("id").get<std::string>();
      info.domain = p.at("domain").get<std::string>();
      info.goals = p.at("goals").get<std::vector<std::string>>();
      info.true_goal = p.at("true_goal").get<std::size_t>();
      info.num_states = p.value("num_states", std::size_t{0});
      info.optimal_length = p.value("optimal_length", std::size_t{0});
      info.noisy_length = p.value("noisy_length", std::size_t{0});
      info.notes = p.value("notes", std::vector<std::string>{});
      r.problems.push_back(std::move(info));
    }
    auto counts_of = [](const nlohmann::json& c) {
      return ConfusionCounts{c.at("tp").get<std::size_t>(), c.at("fp").get<std::size_t>(), c.at("tn").get<std::size_t>(),
                             c.at("fn").get<std::size_t>()};
    };
    for (const auto& cj : j.at("cells")) {
      CellReport c;
      c.domain = cj.at("domain").get<std::string>();
      c.variant = VariantSpec::parse(cj.at("variant").get<std::string>());
      c.measure = cj.at("measure").get<std::string>();
      c.metrics = summarize(counts_of(cj.at("counts")));
      c.top_ranked_ratio = cj.value("top_ranked_ratio", 0.0);
      c.failures = cj.value("failures", std::size_t{0});
      for (const auto& row : cj.at("problems")) {
        ProblemOutcome o;
        o.problem_id = row.at("id").get<std::string>();
        o.true_goal = row.at("true_goal").get<std::size_t>();
        o.obs_length = row.value("obs_length", std::size_t{0});
        o.predicted = row.at("predicted").get<std::vector<std::size_t>>();
        for (const auto& d : row.at("distances")) o.distances.push_back(number_from_json(d));
        o.counts = counts_of(row.at("counts"));
        o.error = row.value("error", std::string());
        c.problems.push_back(std::move(o));
      }
      r.cells.push_back(std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, std::string("invalid report: ") + e.what());
  }
  return r;
}

std::string report_table(const BenchmarkReport& report) {
  // Preserve first-appearance order of domains, variants and measures.
  std::vector<std::string> domains, measures;
  std::vector<VariantSpec> variants;
  for (const auto& c : report.cells) {
    if (std::find(domains.begin(), domains.end(), c.domain) == domains.end()) domains.push_back(c.domain);
    if (std::find(measures.begin(), measures.end(), c.measure) == measures.end()) measures.push_back(c.measure);
    if (std::find(variants.begin(), variants.end(), c.variant) == variants.end()) variants.push_back(c.variant);
  }
  std::ostringstream out;
  for (bool noise : {false, true}) {
    bool any = std::any_of(variants.begin(), variants.end(), [&](const auto& v) { return v.noise == noise; });
    if (!any) continue;
    out << (noise ? "Noisy observations" : "Partial observability") << "\n";
    char line[256];
    std::snprintf(line, sizeof line, "%-6s %-8s %-16s %8s %9s %7s %7s\n", "OBS", "Domain", "Measure", "Accuracy",
                  "Precision", "Recall", "F-Score");
    out << line;
    for (const auto& v : variants) {
      if (v.noise != noise) continue;
      for (const auto& d : domains)
        for (const auto& m : measures) {
          const CellReport* c = report.find(d, v, m);
          if (!c) continue;
          std::snprintf(line, sizeof line, "%-6s %-8s %-16s %8.2f %9.2f %7.2f %7.2f%s\n", v.label().c_str(), d.c_str(),
                        m.c_str(), c->metrics.accuracy, c->metrics.precision, c->metrics.recall, c->metrics.fscore,
                        c->failures ? "  (failures)" : "");
          out << line;
        }
    }
    out << "\n";
  }
  return out.str();
}

std::vector<std::filesystem::path> emit_report(const BenchmarkReport& report, const std::filesystem::path& dir,
                                               unsigned formats) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  auto write = [&](const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
    out << text;
    if (!out) fail(ErrorCode::Io, "failed writing " + path.string());
    written.push_back(path);
  };
  if (formats & kReportCsv) write(dir / "report.csv", report_csv(report));
  if (formats & kReportJson) write(dir / "report.json", report_json(report).dump(2) + "\n");
  return written;
}

}  // namespace graql
