// Command-line driver: generate graphs, crawl them with BFS/RW/MHRW/UNI,
// diagnose chain convergence, estimate distributions, and compare methods
// against ground truth. `run` executes the whole pipeline from a config file.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <unordered_set>

#include <CLI11.hpp>

#include "osn/diagnostics.hpp"
#include "osn/estimators.hpp"
#include "osn/experiment.hpp"
#include "osn/generate.hpp"
#include "osn/graph_io.hpp"
#include "osn/plant.hpp"
#include "osn/samplers.hpp"

namespace fs = std::filesystem;
using namespace osn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitStage = 2;
constexpr int kExitNotConverged = 3;

SocialGraph load_graph(const std::string& edges, const std::string& attrs) {
  SocialGraph g = load_edge_list(edges);
  if (!attrs.empty()) load_attributes(attrs, g);
  return g;
}

std::vector<NodeId> read_samples(const std::string& path, const SocialGraph& g) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<NodeId> nodes;
  std::string token;
  std::size_t line_no = 0;
  while (in >> token) {
    ++line_no;
    auto v = g.find_token(token);
    if (!v) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": unknown node '" +
                       token + "'");
    }
    nodes.push_back(*v);
  }
  if (nodes.empty()) throw Error(path + ": no samples");
  return nodes;
}

std::ofstream checked_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot open " + p.string() + " for writing");
  return out;
}

struct GenerateArgs {
  std::string model = "ba";
  std::size_t n = 1000;
  double p = 0.01;
  std::size_t m = 5;
  std::size_t k = 4;
  double beta = 0.1;
  std::uint64_t seed = 0;
  bool largest = false;
  std::string out_edges;
  // planting
  bool plant = false;
  std::vector<double> regions;
  double pa_base = 0.0, pa_log_slope = 0.0, pa_cap = 1.0, invalid_share = 0.0;
  std::string id_mode = "uniform";
  std::uint64_t id_space = 0xFFFFFFFFULL;
  std::string out_attrs, out_truth;
};

int cmd_generate(const GenerateArgs& a) {
  GraphModel model;
  if (a.model == "er") model = ErdosRenyi{a.n, a.p};
  else if (a.model == "ba") model = BarabasiAlbert{a.n, a.m};
  else if (a.model == "ws") model = WattsStrogatz{a.n, a.k, a.beta};
  else throw Error("config: unknown model '" + a.model + "'");

  SocialGraph g = gen_synthetic(model, a.seed, a.largest);
  if (a.plant) {
    AttributePlantSpec spec;
    spec.region_fractions = a.regions;
    spec.pa_base = a.pa_base;
    spec.pa_log_slope = a.pa_log_slope;
    spec.pa_cap = a.pa_cap;
    spec.invalid_share = a.invalid_share;
    spec.id_mode = id_mode_from_string(a.id_mode);
    spec.id_space = a.id_space;
    const GroundTruth truth = plant_attributes(g, spec, a.seed);
    if (!a.out_truth.empty()) truth.save(a.out_truth);
  }
  save_edge_list(g, a.out_edges);
  if (!a.out_attrs.empty()) save_attributes(g, a.out_attrs);
  std::cout << "generated " << g.node_count() << " nodes, " << g.edge_count()
            << " edges\n";
  return kExitOk;
}

struct SampleArgs {
  std::string edges, attrs;
  std::string method = "mhrw";
  std::size_t chains = 1;
  std::size_t budget = 1000;
  std::size_t target = 1000;
  std::uint64_t seed = 0;
  std::uint64_t id_space = 0;  // 0 = keep the graph default
  bool no_cache = false;
  bool sequential = false;
  std::string out_dir = ".";
};

int cmd_sample(const SampleArgs& a) {
  SocialGraph g = load_graph(a.edges, a.attrs);
  if (a.id_space > 0) g.set_id_space(a.id_space);
  Frontend frontend(g, !a.no_cache);
  fs::create_directories(a.out_dir);
  const fs::path dir(a.out_dir);

  if (a.method == "uni") {
    Rng rng(a.seed);
    const UniResult uni = uni_sample(frontend, a.target, rng);
    auto out = checked_out(dir / "samples.txt");
    for (NodeId v : uni.nodes) out << g.token(v) << '\n';
    std::cout << "accepted " << uni.nodes.size() << " of " << uni.probes
              << " probes (" << format_double(uni.probes_per_accept())
              << " probes/accept)\n";
  } else {
    const Method m = method_from_string(a.method);
    Rng master(a.seed);
    std::vector<NodeId> seeds;
    std::unordered_set<NodeId> used;
    Rng seed_rng = master.stream(0);
    std::size_t guard = 0;
    while (seeds.size() < a.chains) {
      if (++guard > 1000000 + 1000 * a.chains) {
        throw Error("could not find enough crawlable seeds");
      }
      const auto v = static_cast<NodeId>(seed_rng.index(g.node_count()));
      if (!used.insert(v).second || !frontend.is_crawlable(v)) continue;
      seeds.push_back(v);
    }
    const ChainSet chains =
        run_parallel_chains(frontend, m, seeds, a.budget, a.seed, !a.sequential);
    auto out = checked_out(dir / "traces.tsv");
    dump_traces(chains, g, out);
    std::cout << "ran " << chains.traces.size() << " " << a.method
              << " chains of " << a.budget << " iterations\n";
  }
  const CostLedger ledger = frontend.ledger();
  auto out = checked_out(dir / "cost.txt");
  out << "[cost]\n";
  out << "fetches = " << ledger.fetch_count << '\n';
  out << "probes = " << ledger.probe_count << '\n';
  out << "cache_hits = " << ledger.cache_hits << '\n';
  out << "simulated_bytes = " << ledger.simulated_bytes << '\n';
  return kExitOk;
}

struct DiagnoseArgs {
  std::string edges, attrs, traces;
  double geweke_bound = 1.0;
  double gelman_rubin = 1.02;
  int checkpoints = 50;
  std::size_t safety_factor = 2;
  std::string out;
};

int cmd_diagnose(const DiagnoseArgs& a) {
  SocialGraph g = load_graph(a.edges, a.attrs);
  std::ifstream in(a.traces);
  if (!in) throw Error("cannot open " + a.traces);
  const ChainSet chains = parse_traces(in, a.traces, g);
  DiagnosticsThresholds thresholds{a.geweke_bound, a.gelman_rubin, a.checkpoints,
                                   a.safety_factor};
  const DiagnosticsReport report =
      detect_burn_in(standard_metrics(chains, g), thresholds);
  if (a.out.empty()) {
    report.save(std::cout);
  } else {
    auto out = checked_out(a.out);
    report.save(out);
  }
  if (!report.converged) {
    std::cerr << "chains not converged within the budget\n";
    return kExitNotConverged;
  }
  std::cout << "burn_in " << report.burn_in << "\n";
  return kExitOk;
}

struct EstimateArgs {
  std::string edges, attrs, samples, traces;
  std::size_t burn_in = 0;
  std::string method = "sample";
  int userid_grid = 100;
  int log_bins = 4;
  double kmin = 1.0;
  double boundary = 0.0;
  std::string out_dir = ".";
};

int cmd_estimate(const EstimateArgs& a) {
  SocialGraph g = load_graph(a.edges, a.attrs);
  std::vector<NodeId> nodes;
  if (!a.samples.empty()) {
    nodes = read_samples(a.samples, g);
  } else if (!a.traces.empty()) {
    std::ifstream in(a.traces);
    if (!in) throw Error("cannot open " + a.traces);
    nodes = parse_traces(in, a.traces, g).pooled_nodes(a.burn_in);
  } else {
    throw Error("config: estimate needs --samples or --traces");
  }
  EstimateOptions options;
  options.userid_grid = a.userid_grid;
  options.log_bins = BinSpec::log10_bins(a.log_bins);
  options.powerlaw_kmin = a.kmin;
  if (a.boundary > 0.0) options.powerlaw_boundary = a.boundary;
  const EstimateReport report =
      compute_estimates(a.method, nodes, g, {}, options);

  fs::create_directories(a.out_dir);
  write_estimate_report(a.out_dir, report);
  std::cout << "mean degree " << format_double(report.mean_deg) << ", median "
            << format_double(report.median_deg) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph-sampling toolkit: BFS/RW/MHRW/UNI crawls with convergence "
               "diagnostics and distribution estimates"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* cgen = app.add_subcommand("generate", "generate a synthetic graph");
  cgen->add_option("--model", gen.model, "er | ba | ws")->required();
  cgen->add_option("--n", gen.n, "node count")->required();
  cgen->add_option("--p", gen.p, "ER edge probability");
  cgen->add_option("--m", gen.m, "BA edges per new node");
  cgen->add_option("--k", gen.k, "WS ring degree (even)");
  cgen->add_option("--beta", gen.beta, "WS rewiring probability");
  cgen->add_option("--seed", gen.seed, "RNG seed")->required();
  cgen->add_flag("--largest-component", gen.largest, "keep only the largest component");
  cgen->add_option("--out-edges", gen.out_edges, "edge-list output")->required();
  cgen->add_flag("--plant", gen.plant, "plant attributes");
  cgen->add_option("--regions", gen.regions, "region fractions (1..R)");
  cgen->add_option("--pa-base", gen.pa_base);
  cgen->add_option("--pa-log-slope", gen.pa_log_slope);
  cgen->add_option("--pa-cap", gen.pa_cap);
  cgen->add_option("--invalid-share", gen.invalid_share);
  cgen->add_option("--id-mode", gen.id_mode, "uniform | anticorrelated");
  cgen->add_option("--id-space", gen.id_space);
  cgen->add_option("--out-attrs", gen.out_attrs, "attribute file output");
  cgen->add_option("--out-truth", gen.out_truth, "ground-truth sidecar output");

  SampleArgs smp;
  auto* csmp = app.add_subcommand("sample", "crawl or uniformly sample a graph");
  csmp->add_option("--edges", smp.edges)->required();
  csmp->add_option("--attrs", smp.attrs);
  csmp->add_option("--method", smp.method, "bfs | rw | mhrw | uni")->required();
  csmp->add_option("--chains", smp.chains);
  csmp->add_option("--budget", smp.budget);
  csmp->add_option("--target", smp.target, "UNI accepted-sample target");
  csmp->add_option("--id-space", smp.id_space,
                   "user-id space size the ids were planted in (UNI probes)");
  csmp->add_option("--seed", smp.seed)->required();
  csmp->add_flag("--no-cache", smp.no_cache);
  csmp->add_flag("--sequential", smp.sequential);
  csmp->add_option("--out", smp.out_dir)->required();

  DiagnoseArgs dia;
  auto* cdia = app.add_subcommand("diagnose", "convergence diagnostics on traces");
  cdia->add_option("--edges", dia.edges)->required();
  cdia->add_option("--attrs", dia.attrs);
  cdia->add_option("--traces", dia.traces)->required();
  cdia->add_option("--geweke-bound", dia.geweke_bound);
  cdia->add_option("--gelman-rubin", dia.gelman_rubin);
  cdia->add_option("--checkpoints", dia.checkpoints);
  cdia->add_option("--safety-factor", dia.safety_factor);
  cdia->add_option("--out", dia.out);

  EstimateArgs est;
  auto* cest = app.add_subcommand("estimate", "estimate distributions from samples");
  cest->add_option("--edges", est.edges)->required();
  cest->add_option("--attrs", est.attrs);
  cest->add_option("--samples", est.samples, "node-token sample file");
  cest->add_option("--traces", est.traces, "trace file (pooled post burn-in)");
  cest->add_option("--burn-in", est.burn_in);
  cest->add_option("--method", est.method, "label for the report");
  cest->add_option("--userid-grid", est.userid_grid);
  cest->add_option("--log-bins", est.log_bins);
  cest->add_option("--kmin", est.kmin);
  cest->add_option("--boundary", est.boundary, "power-law regime boundary");
  cest->add_option("--out", est.out_dir)->required();

  std::string ego_edges, ego_attrs, ego_samples, ego_out;
  auto* cego = app.add_subcommand("egonets", "collect egonets for sampled nodes");
  cego->add_option("--edges", ego_edges)->required();
  cego->add_option("--attrs", ego_attrs);
  cego->add_option("--samples", ego_samples)->required();
  cego->add_option("--out", ego_out)->required();

  std::string cmp_edges, cmp_attrs, cmp_out;
  std::vector<std::string> cmp_samples;
  auto* ccmp = app.add_subcommand(
      "compare", "compare sample estimates against graph ground truth");
  ccmp->add_option("--edges", cmp_edges)->required();
  ccmp->add_option("--attrs", cmp_attrs);
  ccmp->add_option("--samples", cmp_samples,
                   "method=path sample files (repeatable)")
      ->required();
  ccmp->add_option("--out", cmp_out, "comparison csv (default stdout)");

  std::string run_config, run_out;
  auto* crun = app.add_subcommand("run", "full pipeline from a config file");
  crun->add_option("config", run_config, "experiment config")->required();
  crun->add_option("--out", run_out, "override [output] dir");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cgen) return cmd_generate(gen);
    if (*csmp) return cmd_sample(smp);
    if (*cdia) return cmd_diagnose(dia);
    if (*cest) return cmd_estimate(est);
    if (*cego) {
      SocialGraph g = load_graph(ego_edges, ego_attrs);
      Frontend frontend(g, true);
      std::vector<NodeId> nodes = read_samples(ego_samples, g);
      std::vector<NodeId> egos;
      std::unordered_set<NodeId> seen;
      for (NodeId v : nodes) {
        if (seen.insert(v).second) egos.push_back(v);
      }
      std::vector<EgoNet> egonets;
      egonets.reserve(egos.size());
      for (NodeId v : egos) egonets.push_back(frontend.collect_egonet(v));
      fs::create_directories(ego_out);
      const ClusteringReport cr = clustering(egonets);
      auto out = checked_out(fs::path(ego_out) / "egonets.txt");
      out << "[egonets]\n";
      out << "count = " << egonets.size() << '\n';
      out << "clustering = " << format_double(cr.global) << '\n';
      out << "clustering_skipped = " << cr.skipped << '\n';
      try {
        out << "assortativity = " << format_double(assortativity(degree_pairs(egonets)))
            << '\n';
      } catch (const Error&) {
        out << "assortativity = undefined\n";
      }
      std::cout << "collected " << egonets.size() << " egonets\n";
      return kExitOk;
    }
    if (*ccmp) {
      SocialGraph g = load_graph(cmp_edges, cmp_attrs);
      std::vector<EstimateReport> reports;
      for (const auto& spec : cmp_samples) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos) {
          throw Error("config: --samples expects method=path, got '" + spec + "'");
        }
        const std::string method = spec.substr(0, eq);
        reports.push_back(compute_estimates(
            method, read_samples(spec.substr(eq + 1), g), g, {}, {}));
      }
      const ComparisonTable table = compare_methods(reports, truth_report(g));
      if (cmp_out.empty()) {
        table.save_csv(std::cout);
      } else {
        auto out = checked_out(cmp_out);
        table.save_csv(out);
      }
      return kExitOk;
    }
    if (*crun) {
      ExperimentConfig config = ExperimentConfig::parse(run_config);
      if (!run_out.empty()) config.output_dir = run_out;
      try {
        config.validate();
      } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return kExitConfig;
      }
      const ExperimentResult result = run_experiment(config);
      std::cout << "report tree written to " << config.output_dir << '\n';
      if (result.exit_code == kExitNotConverged) {
        std::cerr << "diagnostics: chains not converged within the budget\n";
      }
      return result.exit_code;
    }
  } catch (const ParseError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    const std::string what = e.what();
    std::cerr << what << '\n';
    return what.rfind("config", 0) == 0 ? kExitConfig : kExitStage;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kExitStage;
  }
  return kExitOk;
}
