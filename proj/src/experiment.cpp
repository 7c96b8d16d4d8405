#include "osn/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "osn/graph_io.hpp"

namespace osn {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw Error("format_double failed");
  return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// config text format

namespace {

using Section = std::map<std::string, std::string>;

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::map<std::string, Section> parse_sections(std::istream& in,
                                              const std::string& name) {
  std::map<std::string, Section> sections;
  std::string line, current;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string s = trim(line.substr(0, line.find('#')));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') {
        throw ParseError(name + ":" + std::to_string(line_no) +
                         ": malformed section header");
      }
      current = trim(s.substr(1, s.size() - 2));
      sections[current];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos || current.empty()) {
      throw ParseError(name + ":" + std::to_string(line_no) +
                       ": expected 'key = value' inside a section");
    }
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) {
      throw ParseError(name + ":" + std::to_string(line_no) + ": empty key");
    }
    if (!sections[current].emplace(key, value).second) {
      throw ParseError(name + ":" + std::to_string(line_no) + ": duplicate key '" +
                       key + "'");
    }
  }
  return sections;
}

class SectionReader {
 public:
  SectionReader(const std::map<std::string, Section>& sections,
                const std::string& name)
      : sections_(sections), file_(name) {}

  std::optional<std::string> raw(const std::string& section,
                                 const std::string& key) const {
    auto s = sections_.find(section);
    if (s == sections_.end()) return std::nullopt;
    auto k = s->second.find(key);
    if (k == s->second.end()) return std::nullopt;
    return k->second;
  }

  void get(const std::string& sec, const std::string& key, std::string& out) const {
    if (auto v = raw(sec, key)) out = *v;
  }
  void get(const std::string& sec, const std::string& key, bool& out) const {
    if (auto v = raw(sec, key)) {
      if (*v == "true") out = true;
      else if (*v == "false") out = false;
      else fail(sec, key, "expected true or false");
    }
  }
  template <typename T>
    requires std::is_integral_v<T>
  void get(const std::string& sec, const std::string& key, T& out) const {
    if (auto v = raw(sec, key)) {
      T value{};
      auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), value);
      if (ec != std::errc{} || p != v->data() + v->size()) {
        fail(sec, key, "expected an integer");
      }
      out = value;
    }
  }
  void get(const std::string& sec, const std::string& key, double& out) const {
    if (auto v = raw(sec, key)) {
      try {
        std::size_t pos = 0;
        out = std::stod(*v, &pos);
        if (pos != v->size()) throw std::invalid_argument("");
      } catch (...) {
        fail(sec, key, "expected a number");
      }
    }
  }
  void get(const std::string& sec, const std::string& key,
           std::optional<double>& out) const {
    if (auto v = raw(sec, key)) {
      double d = 0;
      get(sec, key, d);
      out = d;
    }
  }
  void get(const std::string& sec, const std::string& key,
           std::optional<std::size_t>& out) const {
    if (auto v = raw(sec, key)) {
      std::size_t d = 0;
      get(sec, key, d);
      out = d;
    }
  }
  void get(const std::string& sec, const std::string& key,
           std::vector<std::string>& out) const {
    if (auto v = raw(sec, key)) {
      out.clear();
      std::stringstream ss(*v);
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
      }
    }
  }
  void get(const std::string& sec, const std::string& key,
           std::vector<double>& out) const {
    std::vector<std::string> items;
    get(sec, key, items);
    if (auto v = raw(sec, key)) {
      out.clear();
      for (const auto& item : items) {
        try {
          out.push_back(std::stod(item));
        } catch (...) {
          fail(sec, key, "expected comma-separated numbers");
        }
      }
    }
  }

  [[noreturn]] void fail(const std::string& sec, const std::string& key,
                         const std::string& msg) const {
    throw ParseError(file_ + ": [" + sec + "] " + key + ": " + msg);
  }

 private:
  const std::map<std::string, Section>& sections_;
  std::string file_;
};

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    out += items[i];
  }
  return out;
}

std::string join(const std::vector<double>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    out += format_double(items[i]);
  }
  return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path);
  return parse(in, path);
}

ExperimentConfig ExperimentConfig::parse(std::istream& in, const std::string& name) {
  const auto sections = parse_sections(in, name);
  const SectionReader r(sections, name);
  ExperimentConfig c;

  r.get("graph", "source", c.source);
  r.get("graph", "model", c.model);
  r.get("graph", "n", c.n);
  r.get("graph", "p", c.p);
  r.get("graph", "m", c.m);
  r.get("graph", "k", c.k);
  r.get("graph", "beta", c.beta);
  r.get("graph", "largest_component", c.largest_component);
  r.get("graph", "edge_list", c.edge_list);
  r.get("graph", "attributes", c.attributes);

  r.get("plant", "enabled", c.plant);
  r.get("plant", "regions", c.region_fractions);
  r.get("plant", "pa_base", c.pa_base);
  r.get("plant", "pa_log_slope", c.pa_log_slope);
  r.get("plant", "pa_cap", c.pa_cap);
  r.get("plant", "invalid_share", c.invalid_share);
  r.get("plant", "id_mode", c.id_mode);
  r.get("plant", "id_space", c.id_space);

  r.get("sample", "methods", c.methods);
  r.get("sample", "chains", c.chains);
  r.get("sample", "budget", c.budget);
  r.get("sample", "bfs_budget", c.bfs_budget);
  r.get("sample", "uni_target", c.uni_target);
  r.get("sample", "cache", c.cache);
  r.get("sample", "parallel", c.parallel);

  r.get("diagnostics", "geweke_bound", c.geweke_bound);
  r.get("diagnostics", "gelman_rubin", c.gelman_rubin);
  r.get("diagnostics", "checkpoints", c.checkpoints);
  r.get("diagnostics", "safety_factor", c.safety_factor);

  r.get("estimate", "userid_grid", c.userid_grid);
  r.get("estimate", "log_bins_per_decade", c.log_bins_per_decade);
  r.get("estimate", "powerlaw_kmin", c.powerlaw_kmin);
  r.get("estimate", "powerlaw_boundary", c.powerlaw_boundary);
  r.get("estimate", "egonets", c.egonets);

  r.get("compare", "degree_tv", c.tol_degree_tv);
  r.get("compare", "mean_rel", c.tol_mean_rel);
  r.get("compare", "median_rel", c.tol_median_rel);
  r.get("compare", "region_abs", c.tol_region_abs);
  r.get("compare", "userid_ks", c.tol_userid_ks);
  r.get("compare", "pa_abs", c.tol_pa_abs);

  r.get("output", "dir", c.output_dir);
  r.get("run", "seed", c.seed);
  return c;
}

void ExperimentConfig::emit(std::ostream& out) const {
  out << "[graph]\n";
  out << "source = " << source << '\n';
  if (source == "generate") {
    out << "model = " << model << '\n';
    out << "n = " << n << '\n';
    if (model == "er") out << "p = " << format_double(p) << '\n';
    if (model == "ba") out << "m = " << m << '\n';
    if (model == "ws") {
      out << "k = " << k << '\n';
      out << "beta = " << format_double(beta) << '\n';
    }
    out << "largest_component = " << (largest_component ? "true" : "false") << '\n';
  } else {
    out << "edge_list = " << edge_list << '\n';
    if (!attributes.empty()) out << "attributes = " << attributes << '\n';
    out << "largest_component = " << (largest_component ? "true" : "false") << '\n';
  }
  out << "\n[plant]\n";
  out << "enabled = " << (plant ? "true" : "false") << '\n';
  if (plant) {
    if (!region_fractions.empty()) {
      out << "regions = " << join(region_fractions) << '\n';
    }
    out << "pa_base = " << format_double(pa_base) << '\n';
    out << "pa_log_slope = " << format_double(pa_log_slope) << '\n';
    out << "pa_cap = " << format_double(pa_cap) << '\n';
    out << "invalid_share = " << format_double(invalid_share) << '\n';
    out << "id_mode = " << id_mode << '\n';
    out << "id_space = " << id_space << '\n';
  }
  out << "\n[sample]\n";
  out << "methods = " << join(methods) << '\n';
  out << "chains = " << chains << '\n';
  out << "budget = " << budget << '\n';
  if (bfs_budget) out << "bfs_budget = " << *bfs_budget << '\n';
  out << "uni_target = " << uni_target << '\n';
  out << "cache = " << (cache ? "true" : "false") << '\n';
  out << "parallel = " << (parallel ? "true" : "false") << '\n';
  out << "\n[diagnostics]\n";
  out << "geweke_bound = " << format_double(geweke_bound) << '\n';
  out << "gelman_rubin = " << format_double(gelman_rubin) << '\n';
  out << "checkpoints = " << checkpoints << '\n';
  out << "safety_factor = " << safety_factor << '\n';
  out << "\n[estimate]\n";
  out << "userid_grid = " << userid_grid << '\n';
  out << "log_bins_per_decade = " << log_bins_per_decade << '\n';
  out << "powerlaw_kmin = " << format_double(powerlaw_kmin) << '\n';
  if (powerlaw_boundary) {
    out << "powerlaw_boundary = " << format_double(*powerlaw_boundary) << '\n';
  }
  out << "egonets = " << egonets << '\n';
  out << "\n[compare]\n";
  out << "degree_tv = " << format_double(tol_degree_tv) << '\n';
  out << "mean_rel = " << format_double(tol_mean_rel) << '\n';
  out << "median_rel = " << format_double(tol_median_rel) << '\n';
  out << "region_abs = " << format_double(tol_region_abs) << '\n';
  out << "userid_ks = " << format_double(tol_userid_ks) << '\n';
  out << "pa_abs = " << format_double(tol_pa_abs) << '\n';
  out << "\n[output]\n";
  out << "dir = " << output_dir << '\n';
  out << "\n[run]\n";
  out << "seed = " << seed << '\n';
}

void ExperimentConfig::validate() const {
  if (source != "generate" && source != "file") {
    throw Error("config: [graph] source must be generate or file");
  }
  if (source == "generate") {
    if (model != "er" && model != "ba" && model != "ws") {
      throw Error("config: [graph] model must be er, ba or ws");
    }
    if (n < 2) throw Error("config: [graph] n must be >= 2");
  } else if (edge_list.empty()) {
    throw Error("config: [graph] edge_list required when source = file");
  } else if (!fs::exists(edge_list)) {
    throw Error("config: [graph] edge_list '" + edge_list + "' does not exist");
  }
  if (source == "file" && !attributes.empty() && !fs::exists(attributes)) {
    throw Error("config: [graph] attributes '" + attributes + "' does not exist");
  }
  if (methods.empty()) throw Error("config: [sample] methods must not be empty");
  for (const auto& m : methods) {
    if (m != "bfs" && m != "rw" && m != "mhrw" && m != "uni") {
      throw Error("config: [sample] unknown method '" + m + "'");
    }
  }
  if (chains < 1) throw Error("config: [sample] chains must be >= 1");
  if (budget < 1) throw Error("config: [sample] budget must be >= 1");
  if (bfs_budget && *bfs_budget < 1) {
    throw Error("config: [sample] bfs_budget must be >= 1");
  }
  if (uni_target < 1) throw Error("config: [sample] uni_target must be >= 1");
  if (checkpoints < 1) throw Error("config: [diagnostics] checkpoints must be >= 1");
  if (safety_factor < 1) {
    throw Error("config: [diagnostics] safety_factor must be >= 1");
  }
  if (userid_grid < 2) throw Error("config: [estimate] userid_grid must be >= 2");
  if (log_bins_per_decade < 1) {
    throw Error("config: [estimate] log_bins_per_decade must be >= 1");
  }
  if (output_dir.empty()) throw Error("config: [output] dir must not be empty");
  id_mode_from_string(id_mode);  // throws on junk
}

// ---------------------------------------------------------------------------
// comparison

namespace {

/// Pads a unit-binned pdf onto the integer support [lo, hi).
Histogram rebin_unit(const Histogram& h, double lo, double hi) {
  Histogram out;
  out.binning = h.binning;
  out.sample_size = h.sample_size;
  const auto bins = static_cast<std::size_t>(hi - lo);
  out.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) out.edges[i] = lo + static_cast<double>(i);
  out.counts.assign(bins, 0);
  out.mass.assign(bins, 0.0);
  out.density.assign(bins, 0.0);
  const auto offset = static_cast<std::ptrdiff_t>(h.edges.front() - lo);
  for (std::size_t i = 0; i + 1 < h.edges.size(); ++i) {
    const auto j = static_cast<std::size_t>(offset + static_cast<std::ptrdiff_t>(i));
    out.counts[j] = h.counts[i];
    out.mass[j] = h.mass[i];
    out.density[j] = h.density[i];
  }
  return out;
}

double aligned_unit_tv(const Histogram& a, const Histogram& b) {
  const double lo = std::min(a.edges.front(), b.edges.front());
  const double hi = std::max(a.edges.back(), b.edges.back());
  return distribution_distance(rebin_unit(a, lo, hi), rebin_unit(b, lo, hi),
                               DistanceKind::kTotalVariation)
      .statistic;
}

double region_linf(const std::map<std::uint16_t, double>& a,
                   const std::map<std::uint16_t, double>& b) {
  double d = 0.0;
  auto mass = [](const std::map<std::uint16_t, double>& m, std::uint16_t r) {
    auto it = m.find(r);
    return it == m.end() ? 0.0 : it->second;
  };
  for (const auto& [r, v] : a) d = std::max(d, std::abs(v - mass(b, r)));
  for (const auto& [r, v] : b) d = std::max(d, std::abs(v - mass(a, r)));
  return d;
}

}  // namespace

bool ComparisonTable::all_pass(const std::string& method) const {
  for (const auto& row : rows) {
    if (row.method == method && row.available && !row.pass) return false;
  }
  return true;
}

void ComparisonTable::save_csv(std::ostream& out) const {
  out << "method,metric,estimate,truth,distance,tolerance,pass\n";
  for (const auto& row : rows) {
    out << row.method << ',' << row.metric << ',';
    if (row.available) {
      out << format_double(row.estimate) << ',' << format_double(row.truth) << ','
          << format_double(row.distance) << ',' << format_double(row.tolerance)
          << ',' << (row.pass ? "pass" : "fail");
    } else {
      out << ",,,," << "absent";
    }
    out << '\n';
  }
}

ComparisonTable compare_methods(const std::vector<EstimateReport>& reports,
                                const EstimateReport& truth,
                                const CompareTolerances& tol) {
  if (reports.empty()) throw Error("compare_methods: no reports");
  ComparisonTable table;
  for (const auto& rep : reports) {
    auto add = [&](const std::string& metric, bool available, double estimate,
                   double true_value, double distance, double tolerance) {
      ComparisonRow row;
      row.method = rep.method;
      row.metric = metric;
      row.available = available;
      if (available) {
        row.estimate = estimate;
        row.truth = true_value;
        row.distance = distance;
        row.tolerance = tolerance;
        row.pass = distance <= tolerance;
      }
      table.rows.push_back(row);
    };

    add("mean_degree", true, rep.mean_deg, truth.mean_deg,
        std::abs(rep.mean_deg - truth.mean_deg) / truth.mean_deg, tol.mean_rel);
    add("median_degree", true, rep.median_deg, truth.median_deg,
        std::abs(rep.median_deg - truth.median_deg) /
            std::max(1.0, truth.median_deg),
        tol.median_rel);
    add("degree_pdf_tv", true, 0.0, 0.0,
        aligned_unit_tv(rep.degree_pdf, truth.degree_pdf), tol.degree_tv);
    add("region_mass_linf", true, 0.0, 0.0,
        region_linf(rep.regions, truth.regions), tol.region_abs);
    add("userid_ks", true, 0.0, 0.0, ks_distance(rep.userid, truth.userid),
        tol.userid_ks);
    add("global_pa", true, rep.privacy.global_pa, truth.privacy.global_pa,
        std::abs(rep.privacy.global_pa - truth.privacy.global_pa), tol.pa_abs);
    const bool has_cluster =
        rep.clustering_report.has_value() && truth.clustering_report.has_value();
    add("clustering", has_cluster,
        has_cluster ? rep.clustering_report->global : 0.0,
        has_cluster ? truth.clustering_report->global : 0.0,
        has_cluster
            ? std::abs(rep.clustering_report->global - truth.clustering_report->global)
            : 0.0,
        tol.topology_abs);
    const bool has_r = rep.assortativity_r.has_value() &&
                       truth.assortativity_r.has_value();
    add("assortativity", has_r, has_r ? *rep.assortativity_r : 0.0,
        has_r ? *truth.assortativity_r : 0.0,
        has_r ? std::abs(*rep.assortativity_r - *truth.assortativity_r) : 0.0,
        tol.topology_abs);
  }
  return table;
}

double clustering_from_graph(const SocialGraph& g) {
  double sum = 0.0;
  std::size_t used = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto nb = g.neighbors(v);
    if (nb.size() < 2) continue;
    std::size_t closed = 0;
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        if (g.has_edge(nb[i], nb[j])) ++closed;
      }
    }
    sum += 2.0 * static_cast<double>(closed) /
           (static_cast<double>(nb.size()) * static_cast<double>(nb.size() - 1));
    ++used;
  }
  if (used == 0) throw Error("clustering_from_graph: no node has degree >= 2");
  return sum / static_cast<double>(used);
}

EstimateReport truth_report(const SocialGraph& g, const EstimateOptions& options) {
  std::vector<NodeId> population;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.degree(v) > 0 && g.attributes(v).privacy.view_friends()) {
      population.push_back(v);
    }
  }
  if (population.empty()) throw Error("truth_report: no crawlable nodes");
  EstimateReport report = compute_estimates("truth", population, g, {}, options);
  try {
    report.clustering_report = ClusteringReport{};
    report.clustering_report->global = clustering_from_graph(g);
  } catch (const Error&) {
    report.clustering_report.reset();
  }
  try {
    report.assortativity_r = assortativity(degree_pairs(g));
  } catch (const Error&) {
    report.assortativity_r.reset();
  }
  return report;
}

// ---------------------------------------------------------------------------
// report emission

namespace {

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot open " + p.string() + " for writing");
  return out;
}

void write_histogram_csv(const fs::path& p, const Histogram& h) {
  auto out = open_out(p);
  out << "bin_low,bin_high,mass\n";
  if (h.ccdf) {
    for (std::size_t i = 0; i < h.edges.size(); ++i) {
      out << format_double(h.edges[i]) << ',' << format_double(h.edges[i]) << ','
          << format_double(h.mass[i]) << '\n';
    }
  } else {
    for (std::size_t i = 0; i < h.mass.size(); ++i) {
      out << format_double(h.edges[i]) << ',' << format_double(h.edges[i + 1])
          << ',' << format_double(h.mass[i]) << '\n';
    }
  }
}

void write_curve_csv(const fs::path& p, const BinnedCurve& curve,
                     const std::string& value_name) {
  auto out = open_out(p);
  out << "bin_low,bin_high," << value_name << ",count\n";
  for (const auto& cell : curve.cells) {
    out << format_double(cell.lo) << ',' << format_double(cell.hi) << ','
        << format_double(cell.value) << ',' << cell.count << '\n';
  }
}

void write_estimates(const fs::path& dir, const EstimateReport& rep) {
  {
    auto out = open_out(dir / "estimates.txt");
    out << "[estimates]\n";
    out << "method = " << rep.method << '\n';
    out << "sample_size = " << rep.sample_size << '\n';
    out << "mean_degree = " << format_double(rep.mean_deg) << '\n';
    out << "median_degree = " << format_double(rep.median_deg) << '\n';
    if (rep.alpha_low) {
      out << "powerlaw_alpha_low = " << format_double(*rep.alpha_low) << '\n';
    }
    if (rep.alpha_high) {
      out << "powerlaw_alpha_high = " << format_double(*rep.alpha_high) << '\n';
    }
    out << "global_pa = " << format_double(rep.privacy.global_pa) << '\n';
    if (rep.clustering_report) {
      out << "clustering = " << format_double(rep.clustering_report->global) << '\n';
      out << "clustering_egos = " << rep.clustering_report->egos << '\n';
      out << "clustering_skipped = " << rep.clustering_report->skipped << '\n';
    }
    if (rep.assortativity_r) {
      out << "assortativity = " << format_double(*rep.assortativity_r) << '\n';
    }
    if (rep.egonet_count) out << "egonets = " << rep.egonet_count << '\n';
    out << "\n[regions]\n# region mass\n";
    for (const auto& [r, mass] : rep.regions) {
      out << r << ' ' << format_double(mass) << '\n';
    }
    out << "\n[pa_by_region]\n# region pa count\n";
    for (const auto& [r, cell] : rep.privacy.by_region) {
      out << r << ' ' << format_double(cell.pa) << ' ' << cell.count << '\n';
    }
  }
  write_histogram_csv(dir / "degree_pdf.csv", rep.degree_pdf);
  write_histogram_csv(dir / "degree_pdf_log.csv", rep.degree_pdf_log);
  write_histogram_csv(dir / "degree_ccdf.csv", rep.degree_ccdf);
  {
    auto out = open_out(dir / "userid_cdf.csv");
    out << "x,cdf\n";
    for (std::size_t i = 0; i < rep.userid.x.size(); ++i) {
      out << format_double(rep.userid.x[i]) << ',' << format_double(rep.userid.y[i])
          << '\n';
    }
  }
  write_curve_csv(dir / "pa_by_degree.csv", rep.privacy.by_degree, "pa");
  if (!rep.privacy.by_neighbor_pa.cells.empty()) {
    write_curve_csv(dir / "pa_by_neighbor_pa.csv", rep.privacy.by_neighbor_pa, "pa");
  }
  if (rep.clustering_report && !rep.clustering_report->by_degree.cells.empty()) {
    write_curve_csv(dir / "clustering_by_degree.csv",
                    rep.clustering_report->by_degree, "c");
  }
}

void write_cost(const fs::path& p, const CostLedger& ledger, const ChainSet* chains) {
  auto out = open_out(p);
  out << "[cost]\n";
  out << "fetches = " << ledger.fetch_count << '\n';
  out << "probes = " << ledger.probe_count << '\n';
  out << "cache_hits = " << ledger.cache_hits << '\n';
  out << "simulated_bytes = " << ledger.simulated_bytes << '\n';
  if (chains) {
    // cache hits and bytes are run-level: attribution under a shared cache
    // depends on scheduling, fetch counts do not
    out << "\n[per_chain]\n# chain fetches backtracks proposals accepts\n";
    for (const auto& t : chains->traces) {
      std::uint64_t fetches = 0;
      switch (chains->method) {
        case Method::kBfs:
          fetches = t.length();
          break;
        case Method::kRw:
          fetches = 1 + (t.length() - 1) + t.backtracks;
          break;
        case Method::kMhrw:
          fetches = 1 + t.proposals + t.backtracks;
          break;
      }
      out << t.chain_id << ' ' << fetches << ' ' << t.backtracks << ' '
          << t.proposals << ' ' << t.accepts << '\n';
    }
  }
}

std::vector<NodeId> pick_seeds(const SocialGraph& g, std::size_t count, Rng rng) {
  std::vector<NodeId> seeds;
  std::unordered_set<NodeId> used;
  std::size_t attempts = 0;
  const std::size_t cap = 1000 * std::max<std::size_t>(count, 1) + 1000000;
  while (seeds.size() < count) {
    if (++attempts > cap) {
      throw Error("could not find " + std::to_string(count) + " crawlable seeds");
    }
    const auto v = static_cast<NodeId>(rng.index(g.node_count()));
    if (used.count(v)) continue;
    if (g.degree(v) == 0 || !g.attributes(v).privacy.view_friends()) continue;
    used.insert(v);
    seeds.push_back(v);
  }
  return seeds;
}

// fixed per-purpose RNG stream ids, independent of config order
constexpr std::uint64_t kStreamGraph = 0;
constexpr std::uint64_t kStreamPlant = 1;
constexpr std::uint64_t kStreamSeeds = 100;
constexpr std::uint64_t kStreamBfs = 101;
constexpr std::uint64_t kStreamRw = 102;
constexpr std::uint64_t kStreamMhrw = 103;
constexpr std::uint64_t kStreamUni = 104;
constexpr std::uint64_t kStreamSubsample = 105;

std::uint64_t method_stream(const std::string& method) {
  if (method == "bfs") return kStreamBfs;
  if (method == "rw") return kStreamRw;
  if (method == "mhrw") return kStreamMhrw;
  return kStreamUni;
}

}  // namespace

void write_estimate_report(const std::string& dir, const EstimateReport& report) {
  write_estimates(fs::path(dir), report);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result;
  const Rng master(config.seed);
  const fs::path dir(config.output_dir);
  fs::create_directories(dir);

  auto stage = [](const std::string& name, auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      throw Error(name + ": " + e.what());
    } catch (const std::exception& e) {
      throw Error(name + ": " + e.what());
    }
  };

  {
    auto out = open_out(dir / "config.ini");
    config.emit(out);
  }

  // graph
  stage("graph", [&] {
    if (config.source == "generate") {
      GraphModel model;
      if (config.model == "er") model = ErdosRenyi{config.n, config.p};
      else if (config.model == "ba") model = BarabasiAlbert{config.n, config.m};
      else model = WattsStrogatz{config.n, config.k, config.beta};
      result.graph = gen_synthetic(model, master.stream(kStreamGraph).master_seed(),
                                   config.largest_component);
    } else {
      result.graph = load_edge_list(config.edge_list);
      if (!config.attributes.empty()) {
        load_attributes(config.attributes, result.graph);
      }
      if (config.largest_component) result.graph = largest_component(result.graph);
    }
  });

  // plant
  stage("plant", [&] {
    if (config.plant) {
      AttributePlantSpec spec;
      spec.region_fractions = config.region_fractions;
      spec.pa_base = config.pa_base;
      spec.pa_log_slope = config.pa_log_slope;
      spec.pa_cap = config.pa_cap;
      spec.invalid_share = config.invalid_share;
      spec.id_mode = id_mode_from_string(config.id_mode);
      spec.id_space = config.id_space;
      result.truth =
          plant_attributes(result.graph, spec, master.stream(kStreamPlant).master_seed());
      result.planted = true;
      auto out = open_out(dir / "ground_truth.txt");
      result.truth.save(out);
    }
    save_edge_list(result.graph, (dir / "graph.edges").string());
    save_attributes(result.graph, (dir / "graph.attrs").string());
  });

  EstimateOptions est_options;
  est_options.userid_grid = config.userid_grid;
  est_options.log_bins = BinSpec::log10_bins(config.log_bins_per_decade);
  est_options.powerlaw_kmin = config.powerlaw_kmin;
  est_options.powerlaw_boundary = config.powerlaw_boundary;

  // shared starting points for all crawl methods
  std::vector<NodeId> seeds;
  const bool any_crawl = std::any_of(config.methods.begin(), config.methods.end(),
                                     [](const std::string& m) { return m != "uni"; });
  if (any_crawl) {
    stage("seeds", [&] {
      seeds = pick_seeds(result.graph, config.chains, master.stream(kStreamSeeds));
    });
  }

  bool not_converged = false;
  std::vector<EgoNet> egonets;

  for (const std::string& method : config.methods) {
    stage(method, [&] {
      const fs::path mdir = dir / method;
      fs::create_directories(mdir);
      Frontend frontend(result.graph, config.cache);

      if (method == "uni") {
        const UniResult uni = uni_sample(frontend, config.uni_target,
                                         master.stream(kStreamUni));
        result.uni = uni;
        result.ledgers[method] = frontend.ledger();
        {
          auto out = open_out(mdir / "samples.txt");
          for (NodeId v : uni.nodes) out << result.graph.token(v) << '\n';
        }
        {
          auto out = open_out(mdir / "uni.txt");
          out << "[uni]\n";
          out << "accepts = " << uni.nodes.size() << '\n';
          out << "probes = " << uni.probes << '\n';
          out << "probes_per_accept = " << format_double(uni.probes_per_accept())
              << '\n';
        }
        write_cost(mdir / "cost.txt", result.ledgers[method], nullptr);
        result.estimates[method] =
            compute_estimates(method, uni.nodes, result.graph, {}, est_options);
        write_estimates(mdir, result.estimates[method]);
        return;
      }

      const Method m = method_from_string(method);
      const std::size_t budget =
          (m == Method::kBfs) ? config.bfs_budget.value_or(config.budget)
                              : config.budget;
      ChainSet chains = run_parallel_chains(
          frontend, m, seeds, budget,
          master.stream(method_stream(method)).master_seed(), config.parallel);
      result.ledgers[method] = frontend.ledger();
      {
        auto out = open_out(mdir / "traces.tsv");
        dump_traces(chains, result.graph, out);
      }
      write_cost(mdir / "cost.txt", result.ledgers[method], &chains);

      // burn-in: diagnose the random-walk chains; BFS reuses the MHRW value
      // (the crawl comparison discards the same number of initial nodes from
      // every method)
      std::size_t burn_in = 0;
      if (m != Method::kBfs && config.chains >= 2) {
        DiagnosticsThresholds thresholds;
        thresholds.geweke_bound = config.geweke_bound;
        thresholds.gelman_rubin = config.gelman_rubin;
        thresholds.checkpoints = config.checkpoints;
        thresholds.safety_factor = config.safety_factor;
        const auto series = standard_metrics(chains, result.graph);
        DiagnosticsReport report = detect_burn_in(series, thresholds);
        {
          auto out = open_out(mdir / "diagnostics.txt");
          report.save(out);
        }
        if (report.converged) {
          burn_in = report.burn_in;
        } else {
          not_converged = true;
        }
        result.diagnostics[method] = std::move(report);
      }
      result.burn_ins[method] = burn_in;

      if (m == Method::kMhrw && config.egonets > 0) {
        const std::size_t available = chains.pooled_size(burn_in);
        const std::size_t target = std::min(config.egonets, available);
        const auto positions = subsample_trace(chains, burn_in, target,
                                               master.stream(kStreamSubsample));
        std::vector<NodeId> egos;
        std::unordered_set<NodeId> seen;
        for (NodeId v : positions) {
          if (seen.insert(v).second) egos.push_back(v);
        }
        Frontend ego_frontend(result.graph, true);
        egonets.clear();
        egonets.reserve(egos.size());
        for (NodeId v : egos) egonets.push_back(ego_frontend.collect_egonet(v));
        result.ledgers["egonets"] = ego_frontend.ledger();
        write_cost(mdir / "egonet_cost.txt", result.ledgers["egonets"], nullptr);
      }

      const auto pooled = chains.pooled_nodes(burn_in);
      result.estimates[method] = compute_estimates(
          method, pooled, result.graph,
          (m == Method::kMhrw) ? std::span<const EgoNet>(egonets)
                               : std::span<const EgoNet>{},
          est_options);
      write_estimates(mdir, result.estimates[method]);
      result.chain_sets[method] = std::move(chains);
    });
  }

  // truth + comparison
  stage("compare", [&] {
    const fs::path tdir = dir / "truth";
    fs::create_directories(tdir);
    EstimateReport truth = truth_report(result.graph, est_options);
    write_estimates(tdir, truth);

    CompareTolerances tol;
    tol.degree_tv = config.tol_degree_tv;
    tol.mean_rel = config.tol_mean_rel;
    tol.median_rel = config.tol_median_rel;
    tol.region_abs = config.tol_region_abs;
    tol.userid_ks = config.tol_userid_ks;
    tol.pa_abs = config.tol_pa_abs;
    std::vector<EstimateReport> reports;
    for (const std::string& method : config.methods) {
      reports.push_back(result.estimates.at(method));
    }
    result.comparison = compare_methods(reports, truth, tol);
    {
      auto out = open_out(dir / "compare.csv");
      result.comparison.save_csv(out);
    }
    result.estimates["truth"] = std::move(truth);
  });

  // summary
  {
    auto out = open_out(dir / "summary.txt");
    out << "[summary]\n";
    out << "nodes = " << result.graph.node_count() << '\n';
    out << "edges = " << result.graph.edge_count() << '\n';
    for (const std::string& method : config.methods) {
      out << method << "_sample_size = " << result.estimates[method].sample_size
          << '\n';
      if (auto it = result.burn_ins.find(method); it != result.burn_ins.end()) {
        out << method << "_burn_in = " << it->second << '\n';
      }
      out << method << "_all_pass = "
          << (result.comparison.all_pass(method) ? "true" : "false") << '\n';
    }
    out << "converged = " << (not_converged ? "false" : "true") << '\n';
  }

  result.exit_code = not_converged ? 3 : 0;
  return result;
}

}  // namespace osn
