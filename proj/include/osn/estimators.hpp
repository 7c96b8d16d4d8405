#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "osn/crawlsim.hpp"
#include "osn/graph.hpp"
#include "osn/special.hpp"

namespace osn {

struct BinSpec {
  enum class Kind { kUnit, kLog };
  Kind kind = Kind::kUnit;
  double log_base = 10.0;
  int bins_per_decade = 4;

  static BinSpec unit() { return BinSpec{}; }
  static BinSpec log10_bins(int per_decade = 4) {
    return BinSpec{Kind::kLog, 10.0, per_decade};
  }
};

/// Binned distribution estimate. `mass` is probability per bin and sums to 1
/// in pdf mode; `density` is mass divided by bin width (the usual
/// presentation for log binning). In ccdf mode the edges are the distinct
/// support points and mass[i] = P(X >= edges[i]), non-increasing and 1 at
/// the minimum.
struct Histogram {
  BinSpec binning;
  bool ccdf = false;
  std::size_t sample_size = 0;
  std::vector<double> edges;  // bins+1 boundaries (pdf); support points (ccdf)
  std::vector<std::uint64_t> counts;
  std::vector<double> mass;
  std::vector<double> density;
};

enum class HistogramMode { kPdf, kCcdf };

Histogram degree_distribution(std::span<const double> values, HistogramMode mode,
                              BinSpec binning = BinSpec::unit());

/// Degrees of a node sample (repetitions kept).
std::vector<double> degrees_of(std::span<const NodeId> nodes, const SocialGraph& g);

double mean_degree(std::span<const double> degrees);
double median_degree(std::span<const double> degrees);  // lower median

/// Empirical fraction of the sample per region id, region 0 included.
std::map<std::uint16_t, double> region_mass(std::span<const NodeId> nodes,
                                            const SocialGraph& g);

struct CdfCurve {
  std::vector<double> x;
  std::vector<double> y;
};

/// Empirical user-id cdf evaluated on an evenly spaced grid over
/// (0, id_space], last point at id_space.
CdfCurve userid_cdf(std::span<const NodeId> nodes, const SocialGraph& g,
                    int grid_points = 100);

double ks_distance(const CdfCurve& a, const CdfCurve& b);

/// Continuous maximum-likelihood power-law exponent over {k_i >= k_min}:
///   alpha = 1 + n / sum ln(k_i / k_min).
/// Throws when fewer than two values survive the cut or all equal k_min.
double powerlaw_exponent(std::span<const double> values, double k_min);

struct BinnedCurve {
  struct Cell {
    double lo = 0.0, hi = 0.0;  // bin range [lo, hi)
    double value = 0.0;
    std::uint64_t count = 0;
  };
  std::vector<Cell> cells;
};

struct ClusteringReport {
  double global = 0.0;  // mean C_v over usable egos
  std::size_t egos = 0;
  std::size_t skipped = 0;  // egos with fewer than 2 visible neighbors
  BinnedCurve by_degree;    // C(k): unit bins below 64, log bins above
};

/// Local clustering coefficient of one egonet: C = 2 m / (k (k-1)) with k
/// the visible neighbors and m the edges among them.
std::optional<double> local_clustering(const EgoNet& net);

ClusteringReport clustering(std::span<const EgoNet> egonets);

/// Pearson correlation over ordered endpoint-degree pairs (each undirected
/// edge contributes both directions). Throws when fewer than 2 edges or the
/// endpoint degrees have zero variance.
double assortativity(std::span<const std::pair<double, double>> pairs);

std::vector<std::pair<double, double>> degree_pairs(const SocialGraph& g);

/// Pairs from egonets; edges seen in several egonets are deduplicated by
/// canonical endpoint key first, matching the whole-graph definition.
std::vector<std::pair<double, double>> degree_pairs(std::span<const EgoNet> egonets);

struct PrivacyReport {
  std::size_t sample_size = 0;
  double global_pa = 0.0;  // P(Q != 1111) over the sample
  struct RegionCell {
    double pa = 0.0;
    std::uint64_t count = 0;
  };
  std::map<std::uint16_t, RegionCell> by_region;
  /// PA as a function of degree, restricted to nodes with view_friends = 1
  /// (the only ones whose degree a crawler can see).
  BinnedCurve by_degree;
  /// Ego PA against mean neighbor PA (egonet-based), same restriction.
  BinnedCurve by_neighbor_pa;
};

PrivacyReport privacy_awareness(std::span<const NodeId> nodes, const SocialGraph& g,
                                std::span<const EgoNet> egonets = {},
                                BinSpec degree_bins = BinSpec::log10_bins());

enum class DistanceKind { kTotalVariation, kChiSquare, kKolmogorovSmirnov };

struct DistanceResult {
  double statistic = 0.0;
  std::optional<double> p_value;  // chi-square and KS
};

/// Distance between two compatible histograms (identical binning). The
/// chi-square variant tests a's counts against b as the expected
/// distribution, merging bins with expected count below 5.
DistanceResult distribution_distance(const Histogram& a, const Histogram& b,
                                     DistanceKind kind);

struct GofResult {
  double statistic = 0.0;
  std::uint64_t df = 0;
  double p_value = 1.0;
};

/// Chi-square goodness of fit of observed counts against expected counts
/// (same length, >= 2 cells after merging cells with expected < 5).
GofResult chi_square_gof(std::span<const std::uint64_t> observed,
                         std::span<const double> expected);

/// Everything the pipeline estimates from one method's node sample.
struct EstimateReport {
  std::string method;
  std::size_t sample_size = 0;

  Histogram degree_pdf;      // unit bins
  Histogram degree_pdf_log;  // log bins (plot data)
  Histogram degree_ccdf;
  double mean_deg = 0.0;
  double median_deg = 0.0;
  std::map<std::uint16_t, double> regions;
  CdfCurve userid;
  std::optional<double> alpha_low;   // power-law exponent below the boundary
  std::optional<double> alpha_high;  // and at/above it
  PrivacyReport privacy;

  // egonet-based topology (present when egonets were collected)
  std::optional<ClusteringReport> clustering_report;
  std::optional<double> assortativity_r;
  std::size_t egonet_count = 0;
};

struct EstimateOptions {
  int userid_grid = 100;
  BinSpec log_bins = BinSpec::log10_bins();
  double powerlaw_kmin = 1.0;
  std::optional<double> powerlaw_boundary;  // paper splits at k = 300
};

EstimateReport compute_estimates(const std::string& method,
                                 std::span<const NodeId> nodes,
                                 const SocialGraph& g,
                                 std::span<const EgoNet> egonets = {},
                                 const EstimateOptions& options = {});

}  // namespace osn
