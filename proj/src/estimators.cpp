#include "osn/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>

namespace osn {

namespace {

double span_mean(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

/// Bin layout shared by pdf histograms and binned curves.
class BinLayout {
 public:
  BinLayout(BinSpec spec, double min_value, double max_value) : spec_(spec) {
    if (spec.kind == BinSpec::Kind::kUnit) {
      lo_ = std::floor(min_value);
      const auto bins = static_cast<std::size_t>(std::floor(max_value) - lo_) + 1;
      edges_.reserve(bins + 1);
      for (std::size_t i = 0; i <= bins; ++i) edges_.push_back(lo_ + static_cast<double>(i));
    } else {
      if (min_value < 1.0) {
        throw Error("log binning needs values >= 1");
      }
      const double step = std::log(spec.log_base) / spec.bins_per_decade;
      first_ = static_cast<long>(std::floor(std::log(min_value) / step + 1e-12));
      auto last = static_cast<long>(std::floor(std::log(max_value) / step + 1e-12));
      for (long j = first_; j <= last + 1; ++j) {
        edges_.push_back(std::exp(step * static_cast<double>(j)));
      }
      // snap against fp drift at the ends
      edges_.front() = std::min(edges_.front(), min_value);
      edges_.back() = std::max(edges_.back(), std::nextafter(max_value, 1e300));
    }
  }

  std::size_t bins() const { return edges_.size() - 1; }
  const std::vector<double>& edges() const { return edges_; }

  std::size_t bin_of(double v) const {
    if (spec_.kind == BinSpec::Kind::kUnit) {
      return static_cast<std::size_t>(std::floor(v) - lo_);
    }
    auto it = std::upper_bound(edges_.begin(), edges_.end(), v);
    const auto i = static_cast<std::size_t>(it - edges_.begin());
    return std::min(bins() - 1, i == 0 ? 0 : i - 1);
  }

 private:
  BinSpec spec_;
  double lo_ = 0.0;
  long first_ = 0;
  std::vector<double> edges_;
};

BinnedCurve binned_mean_curve(std::span<const double> xs, std::span<const double> ys,
                              const BinLayout& layout) {
  std::vector<double> sum(layout.bins(), 0.0);
  std::vector<std::uint64_t> count(layout.bins(), 0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const std::size_t b = layout.bin_of(xs[i]);
    sum[b] += ys[i];
    ++count[b];
  }
  BinnedCurve curve;
  for (std::size_t b = 0; b < layout.bins(); ++b) {
    if (count[b] == 0) continue;  // empty cell omitted
    curve.cells.push_back({layout.edges()[b], layout.edges()[b + 1],
                           sum[b] / static_cast<double>(count[b]), count[b]});
  }
  return curve;
}

/// Clustering C(k) bins: unit below k = 64, logarithmic above.
BinnedCurve clustering_curve(std::span<const double> degrees,
                             std::span<const double> cs) {
  std::map<std::uint32_t, std::pair<double, std::uint64_t>> unit;
  std::vector<double> log_k, log_c;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (degrees[i] < 64.0) {
      auto& cell = unit[static_cast<std::uint32_t>(degrees[i])];
      cell.first += cs[i];
      ++cell.second;
    } else {
      log_k.push_back(degrees[i]);
      log_c.push_back(cs[i]);
    }
  }
  BinnedCurve curve;
  for (const auto& [k, cell] : unit) {
    curve.cells.push_back({static_cast<double>(k), static_cast<double>(k) + 1.0,
                           cell.first / static_cast<double>(cell.second),
                           cell.second});
  }
  if (!log_k.empty()) {
    BinLayout layout(BinSpec::log10_bins(8),
                     *std::min_element(log_k.begin(), log_k.end()),
                     *std::max_element(log_k.begin(), log_k.end()));
    auto rest = binned_mean_curve(log_k, log_c, layout);
    curve.cells.insert(curve.cells.end(), rest.cells.begin(), rest.cells.end());
  }
  return curve;
}

}  // namespace

Histogram degree_distribution(std::span<const double> values, HistogramMode mode,
                              BinSpec binning) {
  if (values.empty()) throw Error("degree_distribution: empty sample");
  const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());

  Histogram h;
  h.binning = binning;
  h.sample_size = values.size();

  if (mode == HistogramMode::kCcdf) {
    h.ccdf = true;
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    h.edges = sorted;
    h.mass.reserve(sorted.size());
    // P(X >= support point): count values >= edge by walking from the top
    std::vector<double> all(values.begin(), values.end());
    std::sort(all.begin(), all.end());
    for (double edge : sorted) {
      const auto ge = all.end() - std::lower_bound(all.begin(), all.end(), edge);
      h.mass.push_back(static_cast<double>(ge) / static_cast<double>(all.size()));
    }
    return h;
  }

  BinLayout layout(binning, *min_it, *max_it);
  h.edges = layout.edges();
  h.counts.assign(layout.bins(), 0);
  for (double v : values) ++h.counts[layout.bin_of(v)];
  h.mass.resize(layout.bins());
  h.density.resize(layout.bins());
  for (std::size_t b = 0; b < layout.bins(); ++b) {
    h.mass[b] = static_cast<double>(h.counts[b]) / static_cast<double>(values.size());
    h.density[b] = h.mass[b] / (h.edges[b + 1] - h.edges[b]);
  }
  return h;
}

std::vector<double> degrees_of(std::span<const NodeId> nodes, const SocialGraph& g) {
  std::vector<double> out;
  out.reserve(nodes.size());
  for (NodeId v : nodes) out.push_back(static_cast<double>(g.degree(v)));
  return out;
}

double mean_degree(std::span<const double> degrees) {
  if (degrees.empty()) throw Error("mean_degree: empty sample");
  return span_mean(degrees);
}

double median_degree(std::span<const double> degrees) {
  if (degrees.empty()) throw Error("median_degree: empty sample");
  std::vector<double> sorted(degrees.begin(), degrees.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted[(sorted.size() - 1) / 2];  // lower median
}

std::map<std::uint16_t, double> region_mass(std::span<const NodeId> nodes,
                                            const SocialGraph& g) {
  std::map<std::uint16_t, double> mass;
  for (NodeId v : nodes) mass[g.attributes(v).region_id] += 1.0;
  for (auto& [r, m] : mass) m /= static_cast<double>(nodes.size());
  return mass;
}

CdfCurve userid_cdf(std::span<const NodeId> nodes, const SocialGraph& g,
                    int grid_points) {
  if (nodes.empty()) throw Error("userid_cdf: empty sample");
  if (grid_points < 1) throw Error("userid_cdf: need at least one grid point");
  std::vector<double> ids;
  ids.reserve(nodes.size());
  for (NodeId v : nodes) ids.push_back(static_cast<double>(g.attributes(v).user_id));
  std::sort(ids.begin(), ids.end());

  CdfCurve curve;
  const auto space = static_cast<double>(g.id_space());
  for (int i = 1; i <= grid_points; ++i) {
    const double x = space * static_cast<double>(i) / grid_points;
    const auto le = std::upper_bound(ids.begin(), ids.end(), x) - ids.begin();
    curve.x.push_back(x);
    curve.y.push_back(static_cast<double>(le) / static_cast<double>(ids.size()));
  }
  return curve;
}

double ks_distance(const CdfCurve& a, const CdfCurve& b) {
  if (a.x.size() != b.x.size()) throw Error("ks_distance: different grids");
  double d = 0.0;
  for (std::size_t i = 0; i < a.x.size(); ++i) {
    d = std::max(d, std::abs(a.y[i] - b.y[i]));
  }
  return d;
}

double powerlaw_exponent(std::span<const double> values, double k_min) {
  if (k_min <= 0.0) throw Error("powerlaw_exponent: k_min must be positive");
  double log_sum = 0.0;
  std::size_t n = 0;
  for (double v : values) {
    if (v >= k_min) {
      log_sum += std::log(v / k_min);
      ++n;
    }
  }
  if (n < 2) throw Error("powerlaw_exponent: need at least two values >= k_min");
  if (log_sum <= 0.0) {
    throw Error("powerlaw_exponent: all values equal k_min, estimate diverges");
  }
  return 1.0 + static_cast<double>(n) / log_sum;
}

std::optional<double> local_clustering(const EgoNet& net) {
  const std::size_t k = net.members.size() - 1;  // visible neighbors
  if (k < 2) return std::nullopt;
  std::size_t m = 0;
  for (const auto& [a, b] : net.edges) {
    if (a != net.ego && b != net.ego) ++m;
  }
  return 2.0 * static_cast<double>(m) /
         (static_cast<double>(k) * static_cast<double>(k - 1));
}

ClusteringReport clustering(std::span<const EgoNet> egonets) {
  ClusteringReport report;
  std::vector<double> degrees, cs;
  double sum = 0.0;
  for (const auto& net : egonets) {
    const auto c = local_clustering(net);
    if (!c) {
      ++report.skipped;
      continue;
    }
    ++report.egos;
    sum += *c;
    degrees.push_back(static_cast<double>(net.members.size() - 1));
    cs.push_back(*c);
  }
  if (report.egos == 0) throw Error("clustering: no usable egonets (all k < 2)");
  report.global = sum / static_cast<double>(report.egos);
  report.by_degree = clustering_curve(degrees, cs);
  return report;
}

double assortativity(std::span<const std::pair<double, double>> pairs) {
  if (pairs.size() < 4) {  // two undirected edges, both directions each
    throw Error("assortativity: need at least 2 edges");
  }
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pairs) {
    mx += x;
    my += y;
  }
  const auto n = static_cast<double>(pairs.size());
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto& [x, y] : pairs) {
    sxx += (x - mx) * (x - mx);
    syy += (y - my) * (y - my);
    sxy += (x - mx) * (y - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) {
    throw Error("assortativity: zero degree variance at edge endpoints");
  }
  return sxy / std::sqrt(sxx * syy);
}

std::vector<std::pair<double, double>> degree_pairs(const SocialGraph& g) {
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(2 * g.edge_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto kv = static_cast<double>(g.degree(v));
    for (NodeId w : g.neighbors(v)) {
      pairs.emplace_back(kv, static_cast<double>(g.degree(w)));
    }
  }
  return pairs;
}

std::vector<std::pair<double, double>> degree_pairs(std::span<const EgoNet> egonets) {
  // degrees as declared on the fetched pages
  std::unordered_map<NodeId, double> degree;
  std::set<std::pair<NodeId, NodeId>> edges;
  for (const auto& net : egonets) {
    for (std::size_t i = 0; i < net.members.size(); ++i) {
      degree[net.members[i]] = static_cast<double>(net.member_degree[i]);
    }
    edges.insert(net.edges.begin(), net.edges.end());
  }
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(2 * edges.size());
  for (const auto& [a, b] : edges) {
    pairs.emplace_back(degree.at(a), degree.at(b));
    pairs.emplace_back(degree.at(b), degree.at(a));
  }
  return pairs;
}

PrivacyReport privacy_awareness(std::span<const NodeId> nodes, const SocialGraph& g,
                                std::span<const EgoNet> egonets,
                                BinSpec degree_bins) {
  if (nodes.empty()) throw Error("privacy_awareness: empty sample");
  PrivacyReport report;
  report.sample_size = nodes.size();

  std::uint64_t aware = 0;
  std::map<std::uint16_t, std::pair<std::uint64_t, std::uint64_t>> regions;
  std::vector<double> cond_degrees, cond_aware;
  for (NodeId v : nodes) {
    const auto& a = g.attributes(v);
    const bool is_aware = !a.privacy.is_default();
    aware += is_aware;
    auto& cell = regions[a.region_id];
    ++cell.first;
    cell.second += is_aware;
    // the degree conditional covers nodes whose degree a crawler can see:
    // view_friends = 1 and at least one friend
    if (a.privacy.view_friends() && g.degree(v) > 0) {
      cond_degrees.push_back(static_cast<double>(g.degree(v)));
      cond_aware.push_back(is_aware ? 1.0 : 0.0);
    }
  }
  report.global_pa = static_cast<double>(aware) / static_cast<double>(nodes.size());
  for (const auto& [r, cell] : regions) {
    report.by_region[r] = PrivacyReport::RegionCell{
        static_cast<double>(cell.second) / static_cast<double>(cell.first),
        cell.first};
  }
  if (!cond_degrees.empty()) {
    BinLayout layout(degree_bins,
                     *std::min_element(cond_degrees.begin(), cond_degrees.end()),
                     *std::max_element(cond_degrees.begin(), cond_degrees.end()));
    report.by_degree = binned_mean_curve(cond_degrees, cond_aware, layout);
  }

  if (!egonets.empty()) {
    std::vector<double> neighbor_pa, ego_aware;
    for (const auto& net : egonets) {
      if (net.members.size() < 2) continue;
      if (!net.member_attrs[0].privacy.view_friends()) continue;
      double s = 0.0;
      for (std::size_t i = 1; i < net.members.size(); ++i) {
        s += net.member_attrs[i].privacy.is_default() ? 0.0 : 1.0;
      }
      neighbor_pa.push_back(s / static_cast<double>(net.members.size() - 1));
      ego_aware.push_back(net.member_attrs[0].privacy.is_default() ? 0.0 : 1.0);
    }
    if (!neighbor_pa.empty()) {
      // ten fixed unit-width cells over [0, 1]
      BinnedCurve curve;
      std::vector<double> sum(10, 0.0);
      std::vector<std::uint64_t> count(10, 0);
      for (std::size_t i = 0; i < neighbor_pa.size(); ++i) {
        const auto b = std::min<std::size_t>(9, static_cast<std::size_t>(
                                                    neighbor_pa[i] * 10.0));
        sum[b] += ego_aware[i];
        ++count[b];
      }
      for (std::size_t b = 0; b < 10; ++b) {
        if (count[b] == 0) continue;
        curve.cells.push_back({0.1 * static_cast<double>(b),
                               0.1 * static_cast<double>(b + 1),
                               sum[b] / static_cast<double>(count[b]), count[b]});
      }
      report.by_neighbor_pa = curve;
    }
  }
  return report;
}

GofResult chi_square_gof(std::span<const std::uint64_t> observed,
                         std::span<const double> expected) {
  if (observed.size() != expected.size() || observed.empty()) {
    throw Error("chi_square_gof: mismatched cells");
  }
  // merge adjacent cells until every expected count is at least 5
  std::vector<double> obs_m, exp_m;
  double o_acc = 0.0, e_acc = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    o_acc += static_cast<double>(observed[i]);
    e_acc += expected[i];
    if (e_acc >= 5.0) {
      obs_m.push_back(o_acc);
      exp_m.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (e_acc > 0.0 || o_acc > 0.0) {
    if (exp_m.empty()) {
      obs_m.push_back(o_acc);
      exp_m.push_back(e_acc);
    } else {
      obs_m.back() += o_acc;
      exp_m.back() += e_acc;
    }
  }
  if (obs_m.size() < 2) throw Error("chi_square_gof: too few cells after merging");

  GofResult r;
  for (std::size_t i = 0; i < obs_m.size(); ++i) {
    const double d = obs_m[i] - exp_m[i];
    r.statistic += d * d / exp_m[i];
  }
  r.df = obs_m.size() - 1;
  r.p_value = chi_square_tail(r.statistic, r.df);
  return r;
}

DistanceResult distribution_distance(const Histogram& a, const Histogram& b,
                                     DistanceKind kind) {
  if (a.ccdf || b.ccdf) throw Error("distribution_distance: expects pdf histograms");
  if (a.edges != b.edges) throw Error("distribution_distance: incompatible binning");

  DistanceResult result;
  switch (kind) {
    case DistanceKind::kTotalVariation: {
      double s = 0.0;
      for (std::size_t i = 0; i < a.mass.size(); ++i) {
        s += std::abs(a.mass[i] - b.mass[i]);
      }
      result.statistic = 0.5 * s;
      break;
    }
    case DistanceKind::kChiSquare: {
      std::vector<double> expected(b.mass.size());
      for (std::size_t i = 0; i < b.mass.size(); ++i) {
        expected[i] = b.mass[i] * static_cast<double>(a.sample_size);
      }
      const GofResult gof = chi_square_gof(a.counts, expected);
      result.statistic = gof.statistic;
      result.p_value = gof.p_value;
      break;
    }
    case DistanceKind::kKolmogorovSmirnov: {
      double ca = 0.0, cb = 0.0, d = 0.0;
      for (std::size_t i = 0; i < a.mass.size(); ++i) {
        ca += a.mass[i];
        cb += b.mass[i];
        d = std::max(d, std::abs(ca - cb));
      }
      result.statistic = d;
      const double na = static_cast<double>(a.sample_size);
      const double nb = static_cast<double>(b.sample_size);
      const double ne = std::sqrt(na * nb / (na + nb));
      result.p_value = kolmogorov_tail((ne + 0.12 + 0.11 / ne) * d);
      break;
    }
  }
  return result;
}

namespace {

void split_powerlaw(const std::vector<double>& degrees, const EstimateOptions& opt,
                    EstimateReport& report) {
  try {
    if (opt.powerlaw_boundary) {
      std::vector<double> low, high;
      for (double k : degrees) {
        (k < *opt.powerlaw_boundary ? low : high).push_back(k);
      }
      report.alpha_low = powerlaw_exponent(low, opt.powerlaw_kmin);
      report.alpha_high = powerlaw_exponent(high, *opt.powerlaw_boundary);
    } else {
      report.alpha_low = powerlaw_exponent(degrees, opt.powerlaw_kmin);
    }
  } catch (const Error&) {
    // degenerate degree sample: exponents stay unset
  }
}

}  // namespace

EstimateReport compute_estimates(const std::string& method,
                                 std::span<const NodeId> nodes,
                                 const SocialGraph& g,
                                 std::span<const EgoNet> egonets,
                                 const EstimateOptions& options) {
  if (nodes.empty()) throw Error("compute_estimates: empty sample");
  EstimateReport report;
  report.method = method;
  report.sample_size = nodes.size();

  const std::vector<double> degrees = degrees_of(nodes, g);
  report.degree_pdf = degree_distribution(degrees, HistogramMode::kPdf, BinSpec::unit());
  report.degree_pdf_log =
      degree_distribution(degrees, HistogramMode::kPdf, options.log_bins);
  report.degree_ccdf = degree_distribution(degrees, HistogramMode::kCcdf);
  report.mean_deg = mean_degree(degrees);
  report.median_deg = median_degree(degrees);
  report.regions = region_mass(nodes, g);
  report.userid = userid_cdf(nodes, g, options.userid_grid);
  split_powerlaw(degrees, options, report);
  report.privacy = privacy_awareness(nodes, g, egonets, options.log_bins);

  if (!egonets.empty()) {
    report.egonet_count = egonets.size();
    try {
      report.clustering_report = clustering(egonets);
    } catch (const Error&) {
    }
    try {
      report.assortativity_r = assortativity(degree_pairs(egonets));
    } catch (const Error&) {
    }
  }
  return report;
}

}  // namespace osn
