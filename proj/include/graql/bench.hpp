#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "graql/env.hpp"
#include "graql/metrics.hpp"
#include "graql/obsgen.hpp"
#include "graql/qlearn.hpp"
#include "graql/recognizer.hpp"

namespace graql {

// Parameters for generating a suite of goal recognition problems. Zero-valued
// length and radius fields select per-domain defaults.
struct SuiteOptions {
  DomainKind domain = DomainKind::Grid;
  std::size_t problems = 10;
  std::size_t goals = 4;
  std::uint64_t seed = 0;

  int grid_size = 10;
  double obstacle_density = 0.1;
  int blocks = 4;
  int discs = 5;

  // Maximum pairwise shortest-path distance between candidate goals.
  int radius = 0;
  // Accepted optimal-plan length range from the start to the true goal's cluster.
  int min_length = 0;
  int max_length = 0;

  void apply_defaults();
  nlohmann::json to_json() const;
  static SuiteOptions from_json(const nlohmann::json& j);
};

struct GrProblem {
  std::string id;
  EnvConfig env;
  std::vector<std::string> goals;
  std::size_t true_goal = 0;
  std::uint64_t seed = 0;
};

struct ProblemSuite {
  DomainKind domain = DomainKind::Grid;
  std::uint64_t seed = 0;
  std::vector<GrProblem> problems;

  nlohmann::json to_json() const;
  static ProblemSuite from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static ProblemSuite load(const std::filesystem::path& path);
};

// Throws ErrorCode::Capacity when the domain cannot host the requested goals.
ProblemSuite generate_suite(const SuiteOptions& options);

// A named recognizer column: a distance measure plus the observation flavor it consumes.
struct MeasureChoice {
  std::string name;
  MeasureKind kind = MeasureKind::MaxUtil;
  ObsFlavor flavor = ObsFlavor::StateAction;

  // maxutil, kl, dp, maxutil-states, maxutil-actions
  static MeasureChoice parse(std::string_view name);
  static std::vector<MeasureChoice> defaults();
};

struct RunConfig {
  std::vector<ProblemSuite> suites;
  std::vector<MeasureChoice> measures = MeasureChoice::defaults();
  std::vector<VariantSpec> variants = VariantSpec::standard_variants();
  // The seed is ignored: each problem trains from its own seed.
  LearnConfig learn;
  double delta = 0.1;
  bool normalized = false;
  bool single_goal = false;
  unsigned threads = 1;

  void validate() const;
  // Everything but the suites. Keys: measures, variants, learn, delta,
  // normalized, single_goal, threads.
  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
};

struct ProblemOutcome {
  std::string problem_id;
  std::size_t true_goal = 0;
  std::size_t obs_length = 0;
  std::vector<std::size_t> predicted;
  std::vector<double> distances;
  ConfusionCounts counts;
  // Non-empty when this problem could not be scored in this cell.
  std::string error;
};

struct CellReport {
  std::string domain;
  VariantSpec variant;
  std::string measure;
  std::vector<ProblemOutcome> problems;
  MetricSummary metrics;
  // Fraction of scored problems whose predicted set contains the true goal.
  double top_ranked_ratio = 0.0;
  std::size_t failures = 0;
};

struct ProblemInfo {
  std::string id;
  std::string domain;
  std::vector<std::string> goals;
  std::size_t true_goal = 0;
  std::size_t num_states = 0;
  std::size_t optimal_length = 0;
  std::size_t noisy_length = 0;
  std::vector<std::string> notes;
};

struct BenchmarkReport {
  std::vector<ProblemInfo> problems;
  std::vector<CellReport> cells;

  std::size_t failed_cells() const;
  const CellReport* find(std::string_view domain, const VariantSpec& variant, std::string_view measure) const;
};

// Trains each problem's theory once, then infers and scores every variant x measure cell.
// Per-problem failures are recorded in the cells they affect; the sweep continues.
BenchmarkReport run_experiment(const RunConfig& cfg);

inline constexpr const char* kReportCsvHeader = "domain,observability,noise,measure,accuracy,precision,recall,fscore";

std::string report_csv(const BenchmarkReport& report);
nlohmann::json report_json(const BenchmarkReport& report);
BenchmarkReport report_from_json(const nlohmann::json& j);
// Observability x domain x measure layout, one block per noise setting.
std::string report_table(const BenchmarkReport& report);

enum ReportFormat : unsigned { kReportCsv = 1, kReportJson = 2 };

// Writes report.csv and/or report.json into `dir`; returns the paths written.
std::vector<std::filesystem::path> emit_report(const BenchmarkReport& report, const std::filesystem::path& dir,
                                               unsigned formats = kReportCsv | kReportJson);

}  // namespace graql
