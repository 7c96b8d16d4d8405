#include "osn/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>

namespace osn {

namespace {

double mean_of(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

// unbiased sample variance
double variance_of(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double m = mean_of(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

}  // namespace

MetricSeries metric_series(const WalkTrace& trace, const SocialGraph& g,
                           MetricKind kind, std::uint16_t region) {
  MetricSeries s;
  s.chain_id = trace.chain_id;
  s.values.reserve(trace.length());
  switch (kind) {
    case MetricKind::kDegree: s.metric = "degree"; break;
    case MetricKind::kUserId: s.metric = "user_id"; break;
    case MetricKind::kRegionId: s.metric = "region_id"; break;
    case MetricKind::kMembership: s.metric = "member_r" + std::to_string(region); break;
  }
  for (NodeId v : trace.nodes) {
    switch (kind) {
      case MetricKind::kDegree:
        s.values.push_back(static_cast<double>(g.degree(v)));
        break;
      case MetricKind::kUserId:
        s.values.push_back(static_cast<double>(g.attributes(v).user_id));
        break;
      case MetricKind::kRegionId:
        s.values.push_back(static_cast<double>(g.attributes(v).region_id));
        break;
      case MetricKind::kMembership:
        s.values.push_back(g.attributes(v).region_id == region ? 1.0 : 0.0);
        break;
    }
  }
  return s;
}

std::vector<MetricSeries> standard_metrics(const ChainSet& chains,
                                           const SocialGraph& g) {
  std::vector<MetricSeries> out;
  for (const auto& t : chains.traces) {
    out.push_back(metric_series(t, g, MetricKind::kDegree));
    out.push_back(metric_series(t, g, MetricKind::kUserId));
    if (g.region_count() > 0) {
      out.push_back(metric_series(t, g, MetricKind::kRegionId));
      for (std::uint16_t r = 1; r <= g.region_count(); ++r) {
        out.push_back(metric_series(t, g, MetricKind::kMembership, r));
      }
    }
  }
  return out;
}

double geweke_z(std::span<const double> x, double frac_a, double frac_b) {
  if (x.size() < 20) throw Error("geweke_z: need at least 20 samples");
  if (frac_a <= 0.0 || frac_b <= 0.0 || frac_a + frac_b > 1.0) {
    throw Error("geweke_z: window fractions must be positive and sum to <= 1");
  }
  const auto n = x.size();
  const auto na = std::max<std::size_t>(2, static_cast<std::size_t>(
                                               std::floor(frac_a * static_cast<double>(n))));
  const auto nb = std::max<std::size_t>(2, static_cast<std::size_t>(
                                               std::floor(frac_b * static_cast<double>(n))));
  const auto head = x.subspan(0, na);
  const auto tail = x.subspan(n - nb, nb);
  const double denom = variance_of(head) + variance_of(tail);
  if (denom <= 0.0) {
    throw Error("geweke_z: constant windows, statistic undefined");
  }
  return (mean_of(head) - mean_of(tail)) / std::sqrt(denom);
}

std::vector<GewekePoint> geweke_series(std::span<const double> x, int checkpoints,
                                       double frac_a, double frac_b) {
  if (checkpoints < 1) throw Error("geweke_series: need at least one checkpoint");
  std::vector<GewekePoint> out;
  out.reserve(checkpoints);
  for (int c = 1; c <= checkpoints; ++c) {
    const auto len = static_cast<std::size_t>(
        static_cast<double>(x.size()) * static_cast<double>(c) /
        static_cast<double>(checkpoints));
    GewekePoint p;
    p.iteration = len;
    if (len < 20) {
      p.defined = false;
      p.z = std::numeric_limits<double>::quiet_NaN();
    } else {
      try {
        p.z = geweke_z(x.subspan(0, len), frac_a, frac_b);
      } catch (const Error&) {
        p.defined = false;
        p.z = std::numeric_limits<double>::quiet_NaN();
      }
    }
    out.push_back(p);
  }
  return out;
}

double gelman_rubin_r(const std::vector<std::vector<double>>& chains) {
  const std::size_t m = chains.size();
  if (m < 2) throw Error("gelman_rubin_r: need m >= 2 chains");
  const std::size_t n = chains.front().size();
  if (n < 10) throw Error("gelman_rubin_r: need n >= 10 samples per chain");
  for (const auto& c : chains) {
    if (c.size() != n) throw Error("gelman_rubin_r: chains must have equal length");
  }
  std::vector<double> means(m);
  double w = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    means[i] = mean_of(chains[i]);
    w += variance_of(chains[i]);
  }
  w /= static_cast<double>(m);
  if (w <= 0.0) throw Error("gelman_rubin_r: zero within-chain variance");
  const double b = static_cast<double>(n) * variance_of(means);
  const double nn = static_cast<double>(n);
  return std::sqrt(((nn - 1.0) / nn * w + b / nn) / w);
}

DiagnosticsReport detect_burn_in(const std::vector<MetricSeries>& series,
                                 const DiagnosticsThresholds& thresholds) {
  if (series.empty()) throw Error("detect_burn_in: no metric series");

  // group by metric, chains in chain-id order
  std::map<std::string, std::vector<const MetricSeries*>> by_metric;
  std::size_t budget = series.front().values.size();
  for (const auto& s : series) {
    by_metric[s.metric].push_back(&s);
    if (s.values.size() != budget) {
      throw Error("detect_burn_in: metric series of unequal length");
    }
  }
  {
    std::size_t chains = by_metric.begin()->second.size();
    if (chains < 2) throw Error("detect_burn_in: need at least 2 chains");
    for (auto& [name, group] : by_metric) {
      if (group.size() != chains) {
        throw Error("detect_burn_in: metric '" + name + "' missing chains");
      }
      std::sort(group.begin(), group.end(),
                [](const MetricSeries* a, const MetricSeries* b) {
                  return a->chain_id < b->chain_id;
                });
    }
  }

  DiagnosticsReport report;
  report.thresholds = thresholds;
  const int cp = thresholds.checkpoints;
  for (int c = 1; c <= cp; ++c) {
    report.checkpoint_iterations.push_back(static_cast<std::size_t>(
        static_cast<double>(budget) * static_cast<double>(c) /
        static_cast<double>(cp)));
  }

  const auto sentinel = static_cast<std::size_t>(cp);
  for (const auto& [name, group] : by_metric) {
    const bool constant = std::all_of(group.begin(), group.end(), [&](const MetricSeries* s) {
      return std::all_of(s->values.begin(), s->values.end(), [&](double v) {
        return v == group.front()->values.front();
      });
    });
    if (constant) {
      report.skipped_metrics.push_back(name);
      continue;
    }

    DiagnosticsReport::MetricTable table;
    table.metric = name;
    table.geweke_pass_checkpoint = sentinel;
    table.gr_pass_checkpoint = sentinel;
    for (const MetricSeries* s : group) {
      table.geweke.push_back(
          geweke_series(s->values, cp, 0.1, 0.5));
    }
    table.gelman_rubin.assign(cp, std::numeric_limits<double>::quiet_NaN());
    std::vector<char> geweke_ok(cp, 0), gr_ok(cp, 0);
    for (int c = 0; c < cp; ++c) {
      const std::size_t len = report.checkpoint_iterations[c];
      std::vector<std::vector<double>> prefixes;
      prefixes.reserve(group.size());
      for (const MetricSeries* s : group) {
        prefixes.emplace_back(s->values.begin(),
                              s->values.begin() + static_cast<std::ptrdiff_t>(len));
      }
      if (len >= 10) {
        try {
          table.gelman_rubin[c] = gelman_rubin_r(prefixes);
        } catch (const Error&) {
          // degenerate prefix: flag stays unset at this checkpoint
        }
      }
      geweke_ok[c] = std::all_of(
          table.geweke.begin(), table.geweke.end(), [&](const auto& chain) {
            return chain[c].defined && std::abs(chain[c].z) <= thresholds.geweke_bound;
          });
      gr_ok[c] = !std::isnan(table.gelman_rubin[c]) &&
                 table.gelman_rubin[c] <= thresholds.gelman_rubin;
    }
    // a test has detected convergence at the checkpoint from which its flag
    // holds through the end of the budget; a transient early pass does not
    // count (the adversarial slow-trend case)
    for (int c = cp - 1; c >= 0 && geweke_ok[c]; --c) {
      table.geweke_pass_checkpoint = static_cast<std::size_t>(c);
    }
    for (int c = cp - 1; c >= 0 && gr_ok[c]; --c) {
      table.gr_pass_checkpoint = static_cast<std::size_t>(c);
    }
    report.metrics.push_back(std::move(table));
  }

  if (report.metrics.empty()) {
    throw Error("detect_burn_in: all metrics are constant");
  }

  // convergence is declared when all tests have detected it: the max of the
  // per-test detection checkpoints (sentinel when any test never did)
  std::size_t first_pass = 0;
  for (const auto& table : report.metrics) {
    first_pass = std::max(
        {first_pass, table.geweke_pass_checkpoint, table.gr_pass_checkpoint});
  }

  if (first_pass != sentinel) {
    const std::size_t at = report.checkpoint_iterations[first_pass];
    const std::size_t scaled = thresholds.safety_factor * at;
    if (scaled < budget) {
      report.converged = true;
      report.burn_in = scaled;
      report.convergence_iteration = at;
    }
  }
  return report;
}

std::vector<double> thin(std::span<const double> x, std::size_t r) {
  if (r < 1) throw Error("thin: r must be >= 1");
  std::vector<double> out;
  out.reserve(x.size() / r + 1);
  for (std::size_t i = 0; i < x.size(); i += r) out.push_back(x[i]);
  return out;
}

void DiagnosticsReport::save(std::ostream& out) const {
  out.precision(6);
  out << "[burn_in]\n";
  out << "converged = " << (converged ? "true" : "false") << '\n';
  out << "burn_in = " << (converged ? burn_in : 0) << '\n';
  out << "convergence_iteration = " << (converged ? convergence_iteration : 0)
      << '\n';
  out << "geweke_bound = " << thresholds.geweke_bound << '\n';
  out << "gelman_rubin_threshold = " << thresholds.gelman_rubin << '\n';
  out << "safety_factor = " << thresholds.safety_factor << '\n';
  for (const auto& m : skipped_metrics) {
    out << "skipped = " << m << "  # constant metric\n";
  }
  for (const auto& table : metrics) {
    out << "\n[geweke " << table.metric << "]\n# chain";
    for (std::size_t it : checkpoint_iterations) out << ' ' << it;
    out << '\n';
    for (std::size_t chain = 0; chain < table.geweke.size(); ++chain) {
      out << chain;
      for (const auto& p : table.geweke[chain]) {
        out << ' ';
        if (p.defined) out << p.z;
        else out << "nan";
      }
      out << '\n';
    }
    out << "\n[gelman_rubin " << table.metric << "]\n# iteration r\n";
    for (std::size_t c = 0; c < table.gelman_rubin.size(); ++c) {
      out << checkpoint_iterations[c] << ' ' << table.gelman_rubin[c] << '\n';
    }
  }
}

}  // namespace osn
