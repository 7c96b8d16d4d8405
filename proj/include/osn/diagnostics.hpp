#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "osn/graph.hpp"
#include "osn/samplers.hpp"

namespace osn {

/// One chain's per-iteration values of a convergence metric.
struct MetricSeries {
  int chain_id = 0;
  std::string metric;  // "degree", "user_id", "region_id", "member_r<r>"
  std::vector<double> values;
};

enum class MetricKind { kDegree, kUserId, kRegionId, kMembership };

/// Extracts a metric series from a walk trace. Membership is the 0/1
/// indicator of the given region.
MetricSeries metric_series(const WalkTrace& trace, const SocialGraph& g,
                           MetricKind kind, std::uint16_t region = 0);

/// Standard series for burn-in detection: degree, user_id, region_id, and a
/// membership indicator per planted region (1..R).
std::vector<MetricSeries> standard_metrics(const ChainSet& chains,
                                           const SocialGraph& g);

/// Geweke z-statistic between an early and a late window of one chain:
///   z = (mean(X_a) - mean(X_b)) / sqrt(var(X_a) + var(X_b))
/// where X_a is the first frac_a and X_b the last frac_b of x, and the
/// variances are unbiased sample variances. Throws Error when the combined
/// window variance is zero (constant windows) or |x| < 20.
double geweke_z(std::span<const double> x, double frac_a = 0.1,
                double frac_b = 0.5);

struct GewekePoint {
  std::size_t iteration = 0;  // prefix length the statistic was computed on
  double z = 0.0;
  bool defined = true;  // false when the windows were degenerate
};

/// z computed on growing prefixes at `checkpoints` evenly spaced lengths
/// (the last one is the full sequence).
std::vector<GewekePoint> geweke_series(std::span<const double> x, int checkpoints,
                                       double frac_a = 0.1, double frac_b = 0.5);

/// Gelman-Rubin potential scale reduction over m >= 2 equal-length chains:
///   R = sqrt(((n-1)/n * W + B/n) / W)
/// with W the mean within-chain variance and B = n * variance of the chain
/// means. Throws Error when W = 0, m < 2 or n < 10.
double gelman_rubin_r(const std::vector<std::vector<double>>& chains);

struct DiagnosticsThresholds {
  double geweke_bound = 1.0;  // convergence when |z| <= bound for all chains
  double gelman_rubin = 1.02;
  int checkpoints = 50;
  std::size_t safety_factor = 2;  // declared burn-in = factor * checkpoint
};

struct DiagnosticsReport {
  bool converged = false;
  std::size_t burn_in = 0;                // valid only when converged
  std::size_t convergence_iteration = 0;  // first all-tests-pass checkpoint
  DiagnosticsThresholds thresholds;
  std::vector<std::size_t> checkpoint_iterations;

  struct MetricTable {
    std::string metric;
    std::vector<std::vector<GewekePoint>> geweke;  // [chain][checkpoint]
    std::vector<double> gelman_rubin;              // [checkpoint], NaN if undefined
    std::size_t geweke_pass_checkpoint = 0;        // sentinel: checkpoints
    std::size_t gr_pass_checkpoint = 0;
  };
  std::vector<MetricTable> metrics;
  std::vector<std::string> skipped_metrics;  // constant across all chains

  void save(std::ostream& out) const;
};

/// Declares the burn-in: the smallest checkpoint at which every Geweke flag
/// (every chain, every metric) and every Gelman-Rubin flag (every metric)
/// holds, times the safety factor. Convergence is declared only when the
/// scaled burn-in still leaves samples (burn_in < budget); otherwise the
/// report carries converged = false. Metrics that are constant across all
/// chains over the whole budget are skipped with a warning entry.
DiagnosticsReport detect_burn_in(const std::vector<MetricSeries>& series,
                                 const DiagnosticsThresholds& thresholds = {});

/// Keeps elements at indices 0, r, 2r, ...
std::vector<double> thin(std::span<const double> x, std::size_t r);

}  // namespace osn
