#pragma once

#include <cstdint>
#include <variant>

#include "osn/graph.hpp"
#include "osn/rng.hpp"

namespace osn {

struct ErdosRenyi {
  std::size_t n = 0;
  double p = 0.0;
};

struct BarabasiAlbert {
  std::size_t n = 0;
  std::size_t m = 1;  // edges attached per new node; initial core is K_m
};

struct WattsStrogatz {
  std::size_t n = 0;
  std::size_t k = 2;  // even ring-lattice degree
  double beta = 0.0;  // rewiring probability
};

using GraphModel = std::variant<ErdosRenyi, BarabasiAlbert, WattsStrogatz>;

/// Generates a synthetic graph, deterministic for a fixed (model, seed).
/// With extract_largest_component the result is the relabeled largest
/// connected component (crawls require reachability). Parameter ranges are
/// checked: n >= 2, 0 <= p <= 1, 1 <= m < n, k even with 2 <= k < n,
/// 0 <= beta <= 1.
SocialGraph gen_synthetic(const GraphModel& model, std::uint64_t seed,
                          bool extract_largest_component = false);

}  // namespace osn
