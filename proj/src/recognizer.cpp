#include "graql/recognizer.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <thread>

#include "graql/error.hpp"

namespace graql {

DomainTheory::DomainTheory(std::shared_ptr<const Environment> env, std::vector<Goal> goals, std::vector<QTable> tables,
                           LearnConfig config)
    : env_(std::move(env)),
      goals_(std::move(goals)),
      tables_(std::move(tables)),
      config_(config),
      policies_(std::make_shared<std::vector<PolicyCache>>(goals_.size())) {
  if (!env_) fail(ErrorCode::InvalidArgument, "domain theory needs an environment");
  if (goals_.empty()) fail(ErrorCode::InvalidArgument, "domain theory needs at least one goal");
  if (goals_.size() != tables_.size()) fail(ErrorCode::InvalidArgument, "one Q-table per goal is required");
  for (std::size_t i = 0; i < tables_.size(); ++i) {
    if (tables_[i].num_states() != env_->num_states() || tables_[i].num_actions() != env_->num_actions()) {
      fail(ErrorCode::InvalidArgument, "Q-table " + std::to_string(i) + " does not match the environment");
    }
    if (goals_[i].empty()) warnings_.push_back("goal " + goals_[i].descriptor() + " has no reachable state");
    else if (tables_[i].episodes() > 0 && !tables_[i].goal_reached())
      warnings_.push_back("goal " + goals_[i].descriptor() + " was never reached during training");
  }
}

const StochasticPolicy& DomainTheory::policy(std::size_t i) const {
  auto& cache = policies_->at(i);
  std::call_once(cache.once, [&] { cache.policy = derive_policy(tables_[i]); });
  return cache.policy;
}

void DomainTheory::save(const std::filesystem::path& dir, bool binary) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  nlohmann::json manifest;
  manifest["format"] = "graql-theory";
  manifest["version"] = 1;
  manifest["env"] = env_->config().to_json();
  char fp[24];
  std::snprintf(fp, sizeof fp, "%016llx", static_cast<unsigned long long>(env_->fingerprint()));
  manifest["env_fingerprint"] = fp;
  manifest["learn"] = config_.to_json();
  auto goals = nlohmann::json::array();
  for (std::size_t i = 0; i < goals_.size(); ++i) {
    const std::string file = "goal_" + std::to_string(i) + (binary ? ".qbin" : ".qtable");
    save_qtable(dir / file, tables_[i]);
    goals.push_back({{"descriptor", goals_[i].descriptor()},
                     {"file", file},
                     {"seed", tables_[i].seed()},
                     {"goal_reach_count", tables_[i].goal_reach_count()}});
  }
  manifest["goals"] = goals;
  std::ofstream out(dir / "manifest.json");
  if (!out) fail(ErrorCode::Io, "cannot write " + (dir / "manifest.json").string());
  out << manifest.dump(2) << '\n';
}

DomainTheory DomainTheory::load(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) fail(ErrorCode::Io, "cannot open " + (dir / "manifest.json").string());
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, std::string("invalid theory manifest: ") + e.what());
  }
  if (manifest.value("format", "") != "graql-theory" || manifest.value("version", 0) != 1) {
    fail(ErrorCode::Parse, "unsupported theory manifest in " + dir.string());
  }
  auto env = std::make_shared<const Environment>(EnvConfig::from_json(manifest.at("env")));
  char fp[24];
  std::snprintf(fp, sizeof fp, "%016llx", static_cast<unsigned long long>(env->fingerprint()));
  if (manifest.value("env_fingerprint", "") != fp) {
    fail(ErrorCode::Parse, "theory manifest fingerprint does not match its environment");
  }
  const LearnConfig cfg = LearnConfig::from_json(manifest.at("learn"));
  std::vector<Goal> goals;
  std::vector<QTable> tables;
  for (const auto& g : manifest.at("goals")) {
    goals.push_back(env->compile_goal(g.at("descriptor").get<std::string>()));
    QTable q = load_qtable(dir / g.at("file").get<std::string>());
    q.set_metadata(q.seed(), q.episodes(), g.value("goal_reach_count", std::size_t{0}));
    tables.push_back(std::move(q));
  }
  return DomainTheory(std::move(env), std::move(goals), std::move(tables), cfg);
}

DomainTheory build_theory(std::shared_ptr<const Environment> env, const std::vector<std::string>& goals,
                          const LearnConfig& cfg, unsigned threads) {
  if (!env) fail(ErrorCode::InvalidArgument, "build_theory needs an environment");
  if (goals.empty()) fail(ErrorCode::InvalidArgument, "build_theory needs at least one goal");
  if (std::set<std::string>(goals.begin(), goals.end()).size() != goals.size()) {
    fail(ErrorCode::InvalidArgument, "candidate goals must be pairwise distinct");
  }
  cfg.validate();
  std::vector<Goal> compiled;
  for (const auto& d : goals) compiled.push_back(env->compile_goal(d));

  std::vector<QTable> tables(goals.size());
  auto train = [&](std::size_t i) {
    LearnConfig goal_cfg = cfg;
    goal_cfg.seed = cfg.seed + i;
    tables[i] = learn_q(*env, compiled[i], goal_cfg);
  };
  if (threads <= 1 || goals.size() == 1) {
    for (std::size_t i = 0; i < goals.size(); ++i) train(i);
  } else {
    std::vector<std::exception_ptr> errors(goals.size());
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < goals.size(); ++i) {
      pool.emplace_back([&, i] {
        try {
          train(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
      if (pool.size() >= threads) {
        for (auto& t : pool) t.join();
        pool.clear();
      }
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  return DomainTheory(std::move(env), std::move(compiled), std::move(tables), cfg);
}

bool RecognitionResult::predicts(std::size_t goal) const {
  return std::binary_search(predicted.begin(), predicted.end(), goal);
}

namespace {

double normalized_distance(const DomainTheory& theory, const ObservationSequence& obs, std::size_t goal,
                           const std::vector<std::vector<double>>& contributions) {
  double sum = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    double best = 0.0;
    for (std::size_t g = 0; g < theory.num_goals(); ++g) best = std::max(best, contributions[g][i]);
    if (best > 0.0) sum += contributions[goal][i] / best;
  }
  return -sum;
}

}  // namespace

RecognitionResult infer(const DomainTheory& theory, const ObservationSequence& obs, const MeasureSpec& measure,
                        const InferOptions& options) {
  if (obs.empty()) fail(ErrorCode::Contract, "inference needs a non-empty observation sequence");
  if (measure.kind != MeasureKind::MaxUtil && obs.flavor != ObsFlavor::StateAction) {
    fail(ErrorCode::Contract, std::string(measure_name(measure.kind)) + " requires state-action observations");
  }
  RecognitionResult result;
  result.measure = measure;
  result.flavor = obs.flavor;
  const std::size_t n = theory.num_goals();
  result.distances.resize(n);

  if (options.normalized && measure.kind == MeasureKind::MaxUtil && obs.flavor != ObsFlavor::StateAction) {
    std::vector<std::vector<double>> contrib(n);
    for (std::size_t g = 0; g < n; ++g) {
      contrib[g] = obs.flavor == ObsFlavor::StateOnly ? state_contributions(theory.table(g), obs)
                                                      : action_contributions(theory.table(g), obs);
    }
    for (std::size_t g = 0; g < n; ++g) result.distances[g] = normalized_distance(theory, obs, g, contrib);
  } else {
    for (std::size_t g = 0; g < n; ++g) {
      const QTable& q = theory.table(g);
      double d = 0.0;
      switch (measure.kind) {
        case MeasureKind::MaxUtil:
          d = obs.flavor == ObsFlavor::StateAction ? maxutil(q, obs)
              : obs.flavor == ObsFlavor::StateOnly ? maxutil_states(q, obs)
                                                   : maxutil_actions(q, obs);
          break;
        case MeasureKind::KL: d = kl(q, obs, theory.env()); break;
        case MeasureKind::DP: d = divergence_point(q, obs, measure.delta); break;
      }
      result.distances[g] = d;
    }
  }

  if (options.single_goal) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t chosen = 0;
    for (std::size_t g = 0; g < n; ++g) {
      if (result.distances[g] <= best) {
        best = result.distances[g];
        chosen = g;
      }
    }
    result.predicted = {chosen};
  } else {
    const double best = *std::min_element(result.distances.begin(), result.distances.end());
    for (std::size_t g = 0; g < n; ++g)
      if (result.distances[g] == best) result.predicted.push_back(g);
  }
  return result;
}

}  // namespace graql
