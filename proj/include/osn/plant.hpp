#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "osn/graph.hpp"
#include "osn/rng.hpp"

namespace osn {

enum class IdMode {
  kUniformSparse,        // distinct uniform ids over [1, id_space]
  kDegreeAnticorrelated  // low ids on high-degree nodes (older-user effect)
};

/// Declarative attribute-planting model. Everything planted is recorded as
/// ground truth so estimates can be scored exactly.
///
/// Privacy: a node of degree k is "privacy aware" (Q != 1111) with
/// probability PA(k) = clamp(pa_base + pa_log_slope * log10(max(k,1)), 0,
/// pa_cap). Aware nodes hide their friend list (Q = 1101, invalid for
/// crawling) with probability invalid_share, and hide their photo (Q = 1011)
/// otherwise.
struct AttributePlantSpec {
  std::vector<double> region_fractions;  // regions 1..R; remainder is region 0
  double pa_base = 0.0;
  double pa_log_slope = 0.0;
  double pa_cap = 1.0;
  double invalid_share = 0.0;
  IdMode id_mode = IdMode::kUniformSparse;
  std::uint64_t id_space = 0xFFFFFFFFULL;

  double pa_of_degree(std::uint32_t k) const;
};

/// Exact realized ground truth recorded next to a planted graph.
struct GroundTruth {
  std::uint64_t seed = 0;
  IdMode id_mode = IdMode::kUniformSparse;
  std::uint64_t id_space = 0xFFFFFFFFULL;
  double pa_base = 0.0, pa_log_slope = 0.0, pa_cap = 1.0, invalid_share = 0.0;
  std::vector<double> planted_region_fractions;   // index = region id, incl 0
  std::vector<double> realized_region_fractions;  // over all nodes

  struct DegreeRow {
    std::uint32_t degree = 0;
    std::uint64_t nodes = 0;
    std::uint64_t aware = 0;    // Q != 1111
    std::uint64_t invalid = 0;  // view_friends = 0
  };
  std::vector<DegreeRow> pa_by_degree;  // ascending degree

  std::uint64_t node_count = 0;
  double realized_global_pa = 0.0;      // P(Q != 1111) over all nodes
  double realized_valid_pa = 0.0;       // P(Q != 1111 | view_friends = 1)
  double realized_invalid_fraction = 0.0;

  void save(const std::string& path) const;
  void save(std::ostream& out) const;
  static GroundTruth load(const std::string& path);
  static GroundTruth load(std::istream& in, const std::string& name);
};

/// Assigns user ids, regions and privacy settings in place, per the spec,
/// deterministically for a fixed seed. Region fractions must sum to <= 1
/// (the remainder lands in region 0). Returns the realized ground truth and
/// updates the graph's id space and region count.
GroundTruth plant_attributes(SocialGraph& g, const AttributePlantSpec& spec,
                             std::uint64_t seed);

const char* to_string(IdMode m);
IdMode id_mode_from_string(const std::string& s);

}  // namespace osn
