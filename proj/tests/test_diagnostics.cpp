#include <doctest.h>

#include <cmath>

#include "osn/diagnostics.hpp"
#include "osn/generate.hpp"
#include "osn/samplers.hpp"
#include "support/oracles.hpp"

using namespace osn;

TEST_CASE("geweke: identical windows give z = 0") {
  std::vector<double> x;
  for (int rep = 0; rep < 10; ++rep) {
    for (double v : {1.0, 2.0, 3.0}) x.push_back(v);
  }
  CHECK(geweke_z(x, 0.3, 0.3) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("geweke: constructed windows give 1/sqrt(2)") {
  // each window: ten symmetric pairs at distance 1 plus the mean itself,
  // so the unbiased sample variance is exactly 20/20 = 1
  std::vector<double> x;
  for (int i = 0; i < 10; ++i) {
    x.push_back(0.0);
    x.push_back(2.0);
  }
  x.push_back(1.0);  // window A: mean 1, var 1
  for (int i = 0; i < 10; ++i) {
    x.push_back(-1.0);
    x.push_back(1.0);
  }
  x.push_back(0.0);  // window B: mean 0, var 1
  const double z = geweke_z(x, 0.5, 0.5);
  CHECK(z == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("geweke: preconditions and degenerate windows") {
  std::vector<double> tiny(10, 1.0);
  CHECK_THROWS_AS(geweke_z(tiny), Error);
  std::vector<double> constant(100, 3.0);
  CHECK_THROWS_WITH_AS(geweke_z(constant), doctest::Contains("constant"), Error);
  std::vector<double> x(100, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i % 7);
  CHECK_THROWS_AS(geweke_z(x, 0.6, 0.6), Error);  // fractions must sum <= 1
}

TEST_CASE("geweke: invariant under shift; unchanged by positive scaling") {
  Rng rng(5);
  std::vector<double> x(5000);
  for (auto& v : x) v = rng.normal();
  const double z = geweke_z(x);
  std::vector<double> shifted = x, scaled = x;
  for (auto& v : shifted) v += 123.0;
  for (auto& v : scaled) v *= 4.5;
  CHECK(geweke_z(shifted) == doctest::Approx(z).epsilon(1e-9));
  CHECK(geweke_z(scaled) == doctest::Approx(z).epsilon(1e-9));
}

TEST_CASE("geweke: calibrated on iid normal draws") {
  // z is bounded well inside [-1.96, 1.96] for stationary iid input
  int inside = 0;
  const int runs = 1000;
  for (int run = 0; run < runs; ++run) {
    Rng rng(static_cast<std::uint64_t>(run) + 1);
    std::vector<double> x(10000);
    for (auto& v : x) v = rng.normal();
    if (std::abs(geweke_z(x)) <= 1.96) ++inside;
  }
  CHECK(inside >= static_cast<int>(0.93 * runs));
}

TEST_CASE("geweke series: trending input never converges") {
  std::vector<double> x(2000);
  for (std::size_t t = 0; t < x.size(); ++t) x[t] = static_cast<double>(t);
  const auto series = geweke_series(x, 10);
  CHECK(series.size() == 10);
  for (const auto& p : series) {
    if (p.defined) CHECK(std::abs(p.z) > 1.0);
  }
  CHECK(series.back().iteration == 2000);
}

TEST_CASE("geweke series: stationary input converges early") {
  Rng rng(17);
  std::vector<double> x(2000);
  for (auto& v : x) v = rng.normal();
  const auto series = geweke_series(x, 10);
  CHECK(series.front().defined);
  CHECK(std::abs(series.front().z) <= 1.0);
}

TEST_CASE("geweke series: one checkpoint equals the scalar statistic") {
  Rng rng(19);
  std::vector<double> x(500);
  for (auto& v : x) v = rng.normal();
  const auto series = geweke_series(x, 1);
  REQUIRE(series.size() == 1);
  CHECK(series[0].iteration == 500);
  CHECK(series[0].z == doctest::Approx(geweke_z(x)).epsilon(1e-15));
}

TEST_CASE("gelman-rubin: identical chains give sqrt((n-1)/n)") {
  Rng rng(23);
  std::vector<double> base(200);
  for (auto& v : base) v = rng.normal();
  const std::vector<std::vector<double>> chains(4, base);
  CHECK(gelman_rubin_r(chains) ==
        doctest::Approx(std::sqrt(199.0 / 200.0)).epsilon(1e-12));
}

TEST_CASE("gelman-rubin: same-distribution chains stay under 1.02") {
  std::vector<std::vector<double>> chains;
  for (int c = 0; c < 8; ++c) {
    Rng rng(100 + c);
    std::vector<double> x(10000);
    for (auto& v : x) v = rng.normal();
    chains.push_back(std::move(x));
  }
  CHECK(gelman_rubin_r(chains) < 1.02);
}

TEST_CASE("gelman-rubin: split means blow up R") {
  std::vector<std::vector<double>> chains;
  for (int c = 0; c < 8; ++c) {
    Rng rng(200 + c);
    std::vector<double> x(1000);
    const double mean = c < 4 ? 0.0 : 10.0;
    for (auto& v : x) v = mean + rng.normal();
    chains.push_back(std::move(x));
  }
  CHECK(gelman_rubin_r(chains) > 1.5);
}

TEST_CASE("gelman-rubin: affine invariance and the B >= 0 floor") {
  Rng rng(31);
  std::vector<std::vector<double>> chains;
  for (int c = 0; c < 5; ++c) {
    std::vector<double> x(500);
    for (auto& v : x) v = rng.normal() * (c + 1);
    chains.push_back(std::move(x));
  }
  const double r = gelman_rubin_r(chains);
  auto mapped = chains;
  for (auto& chain : mapped) {
    for (auto& v : chain) v = 3.0 * v - 7.0;
  }
  CHECK(gelman_rubin_r(mapped) == doctest::Approx(r).epsilon(1e-12));

  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<double>> random_chains;
    const std::size_t n = 10 + rng.index(200);
    for (int c = 0; c < 3; ++c) {
      std::vector<double> x(n);
      for (auto& v : x) v = rng.normal() + static_cast<double>(rng.index(3));
      random_chains.push_back(std::move(x));
    }
    CHECK(gelman_rubin_r(random_chains) >=
          std::sqrt((static_cast<double>(n) - 1.0) / static_cast<double>(n)) -
              1e-12);
  }
}

TEST_CASE("gelman-rubin: preconditions") {
  std::vector<std::vector<double>> one{{1, 2, 3}};
  CHECK_THROWS_AS(gelman_rubin_r(one), Error);
  std::vector<std::vector<double>> constant{std::vector<double>(100, 1.0),
                                            std::vector<double>(100, 1.0)};
  CHECK_THROWS_AS(gelman_rubin_r(constant), Error);
}

namespace {

std::vector<MetricSeries> synthetic_chains(int chains, std::size_t n,
                                           bool one_trending) {
  std::vector<MetricSeries> out;
  for (int c = 0; c < chains; ++c) {
    Rng rng(400 + c);
    MetricSeries s;
    s.chain_id = c;
    s.metric = "metric";
    s.values.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
      s.values[t] = rng.normal();
      if (one_trending && c == 0) s.values[t] += 0.01 * static_cast<double>(t);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

TEST_CASE("detect_burn_in: stationary chains declare early") {
  const auto series = synthetic_chains(8, 2000, false);
  DiagnosticsThresholds thresholds;
  thresholds.checkpoints = 10;
  const DiagnosticsReport report = detect_burn_in(series, thresholds);
  REQUIRE(report.converged);
  // safety factor 2 on the first checkpoint
  CHECK(report.burn_in <= 2 * report.checkpoint_iterations.front());
}

TEST_CASE("detect_burn_in: one trending chain forces the sentinel") {
  const auto series = synthetic_chains(8, 2000, true);
  const DiagnosticsReport report = detect_burn_in(series);
  CHECK_FALSE(report.converged);
}

TEST_CASE("detect_burn_in: loosening thresholds never delays the declaration") {
  const auto series = synthetic_chains(6, 3000, false);
  DiagnosticsThresholds tight;
  tight.geweke_bound = 0.5;
  tight.gelman_rubin = 1.001;
  DiagnosticsThresholds loose;
  loose.geweke_bound = 2.0;
  loose.gelman_rubin = 1.2;
  const auto tight_report = detect_burn_in(series, tight);
  const auto loose_report = detect_burn_in(series, loose);
  REQUIRE(loose_report.converged);
  if (tight_report.converged) {
    CHECK(loose_report.burn_in <= tight_report.burn_in);
  }
}

TEST_CASE("detect_burn_in: constant metric is skipped with a warning") {
  auto series = synthetic_chains(4, 1000, false);
  for (int c = 0; c < 4; ++c) {
    MetricSeries s;
    s.chain_id = c;
    s.metric = "flat";
    s.values.assign(1000, 7.0);
    series.push_back(std::move(s));
  }
  const DiagnosticsReport report = detect_burn_in(series);
  REQUIRE(report.skipped_metrics.size() == 1);
  CHECK(report.skipped_metrics[0] == "flat");
  CHECK(report.converged);
}

TEST_CASE("metric series extraction") {
  SocialGraph g = SocialGraph::from_edges(3, {{0, 1}, {1, 2}});
  std::vector<NodeAttributes> attrs(3);
  attrs[0] = {10, 1, PrivacySettings{}};
  attrs[1] = {20, 0, PrivacySettings{}};
  attrs[2] = {30, 2, PrivacySettings{}};
  g.set_attributes(attrs);
  g.set_region_count(2);
  WalkTrace t;
  t.chain_id = 3;
  t.nodes = {0, 1, 1, 2};
  t.events.assign(4, WalkEvent::kMove);

  const auto degree = metric_series(t, g, MetricKind::kDegree);
  CHECK(degree.values == std::vector<double>{1, 2, 2, 1});
  const auto uid = metric_series(t, g, MetricKind::kUserId);
  CHECK(uid.values == std::vector<double>{10, 20, 20, 30});
  const auto member = metric_series(t, g, MetricKind::kMembership, 2);
  CHECK(member.values == std::vector<double>{0, 0, 0, 1});
  CHECK(member.metric == "member_r2");
}

TEST_CASE("thin: identity, single element, and decorrelation on AR(1)") {
  std::vector<double> x{1, 2, 3, 4, 5};
  CHECK(thin(x, 1) == x);
  CHECK(thin(x, 5) == std::vector<double>{1});
  CHECK(thin(x, 2) == std::vector<double>{1, 3, 5});
  CHECK_THROWS_AS(thin(x, 0), Error);

  Rng rng(55);
  const auto series = oracle::ar1(50000, 0.9, rng);
  const auto thinned = thin(series, 10);
  CHECK(oracle::autocorrelation(thinned, 1) <
        oracle::autocorrelation(series, 1));
}
