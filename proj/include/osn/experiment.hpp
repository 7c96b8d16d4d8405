#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "osn/diagnostics.hpp"
#include "osn/estimators.hpp"
#include "osn/generate.hpp"
#include "osn/plant.hpp"
#include "osn/samplers.hpp"

namespace osn {

/// Flat key-value experiment configuration with one level of [sections];
/// see parse/emit for the exact text format. parse(emit(c)) == c.
struct ExperimentConfig {
  // [graph]
  std::string source = "generate";  // generate | file
  std::string model = "ba";         // er | ba | ws
  std::size_t n = 1000;
  double p = 0.01;
  std::size_t m = 5;
  std::size_t k = 4;
  double beta = 0.1;
  bool largest_component = true;
  std::string edge_list;    // source = file
  std::string attributes;   // optional attribute file

  // [plant]
  bool plant = true;
  std::vector<double> region_fractions;
  double pa_base = 0.0;
  double pa_log_slope = 0.0;
  double pa_cap = 1.0;
  double invalid_share = 0.0;
  std::string id_mode = "uniform";
  std::uint64_t id_space = 0xFFFFFFFFULL;

  // [sample]
  std::vector<std::string> methods{"mhrw", "rw", "bfs", "uni"};
  std::size_t chains = 28;
  std::size_t budget = 81000;
  std::optional<std::size_t> bfs_budget;  // default: budget
  std::size_t uni_target = 81000;
  bool cache = true;
  bool parallel = true;

  // [diagnostics]
  double geweke_bound = 1.0;
  double gelman_rubin = 1.02;
  int checkpoints = 50;
  std::size_t safety_factor = 2;

  // [estimate]
  int userid_grid = 100;
  int log_bins_per_decade = 4;
  double powerlaw_kmin = 1.0;
  std::optional<double> powerlaw_boundary;
  std::size_t egonets = 0;  // egonets collected from the MHRW sub-sample

  // [compare]
  double tol_degree_tv = 0.05;
  double tol_mean_rel = 0.05;
  double tol_median_rel = 0.10;
  double tol_region_abs = 0.02;
  double tol_userid_ks = 0.05;
  double tol_pa_abs = 0.02;

  // [output]
  std::string output_dir = "out";

  // [run]
  std::uint64_t seed = 0;

  static ExperimentConfig parse(const std::string& path);
  static ExperimentConfig parse(std::istream& in, const std::string& name);
  void emit(std::ostream& out) const;
  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

struct CompareTolerances {
  double degree_tv = 0.05;
  double mean_rel = 0.05;
  double median_rel = 0.10;
  double region_abs = 0.02;
  double userid_ks = 0.05;
  double pa_abs = 0.02;
  double topology_abs = 0.05;  // egonet clustering / assortativity
};

struct ComparisonRow {
  std::string method;
  std::string metric;
  bool available = true;  // false: metric missing in the report, not a failure
  double estimate = 0.0;
  double truth = 0.0;
  double distance = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;
  bool all_pass(const std::string& method) const;
  void save_csv(std::ostream& out) const;
};

/// Per-metric comparison of method estimates against the ground-truth
/// report: estimate, truth, distance and pass/fail at the configured
/// tolerance.
ComparisonTable compare_methods(const std::vector<EstimateReport>& reports,
                                const EstimateReport& truth,
                                const CompareTolerances& tol = {});

/// The estimates a perfect uniform sampler of the crawlable population
/// (view_friends = 1, degree >= 1) would produce, computed directly from
/// the graph. Used as the comparison truth; clustering and assortativity
/// come from a whole-graph pass rather than egonets.
EstimateReport truth_report(const SocialGraph& g, const EstimateOptions& options = {});

double clustering_from_graph(const SocialGraph& g);

struct ExperimentResult {
  int exit_code = 0;
  SocialGraph graph;
  bool planted = false;
  GroundTruth truth;
  std::map<std::string, ChainSet> chain_sets;
  std::map<std::string, DiagnosticsReport> diagnostics;
  std::map<std::string, std::size_t> burn_ins;
  std::map<std::string, EstimateReport> estimates;  // methods + "truth"
  std::map<std::string, CostLedger> ledgers;
  std::optional<UniResult> uni;
  ComparisonTable comparison;
};

/// Runs the full pipeline (generate/load -> plant -> crawl -> diagnose ->
/// estimate -> compare) and writes the report tree under
/// config.output_dir. Deterministic for a fixed config. Exit codes: 0
/// success, 1 config error, 2 stage failure, 3 diagnostics declared
/// not-converged. Stage failures abort with a stage-tagged Error after
/// preserving partial outputs.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Shortest-round-trip decimal form of a double (config/report emission).
std::string format_double(double v);

/// Writes estimates.txt plus the histogram/curve CSVs under `dir`.
void write_estimate_report(const std::string& dir, const EstimateReport& report);

}  // namespace osn
