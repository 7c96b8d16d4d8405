#include <doctest.h>

#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "osn/estimators.hpp"
#include "osn/generate.hpp"
#include "osn/plant.hpp"
#include "osn/samplers.hpp"
#include "support/graph_enum.hpp"
#include "support/oracles.hpp"

using namespace osn;

namespace {

SocialGraph path3() { return SocialGraph::from_edges(3, {{0, 1}, {1, 2}}); }

SocialGraph star4() {
  return SocialGraph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}});
}

std::vector<std::uint64_t> visit_counts(const WalkTrace& t, std::size_t n) {
  std::vector<std::uint64_t> counts(n, 0);
  for (NodeId v : t.nodes) ++counts[v];
  return counts;
}

SocialGraph with_hidden(SocialGraph g, std::initializer_list<NodeId> hidden) {
  std::vector<NodeAttributes> attrs(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) attrs[v].user_id = v + 1;
  for (NodeId v : hidden) attrs[v].privacy = PrivacySettings::parse("1101");
  g.set_attributes(attrs);
  return g;
}

}  // namespace

TEST_CASE("bfs: path graph is visited in order and flagged exhausted") {
  const SocialGraph g = path3();
  Frontend fe(g);
  const WalkTrace t = bfs_crawl(fe, 0, 10, Rng(1));
  CHECK(t.nodes == std::vector<NodeId>{0, 1, 2});
  CHECK(t.exhausted);
}

TEST_CASE("bfs: budget cuts the crawl after the seed plus one leaf") {
  const SocialGraph g = star4();
  Frontend fe(g);
  const WalkTrace t = bfs_crawl(fe, 0, 2, Rng(3));
  CHECK(t.length() == 2);
  CHECK(t.nodes[0] == 0);
  CHECK(t.nodes[1] >= 1);
  CHECK_FALSE(t.exhausted);
}

TEST_CASE("bfs: stays inside the seed's component") {
  // triangle 0-1-2 plus separate edge 3-4
  const SocialGraph g =
      SocialGraph::from_edges(5, {{0, 1}, {1, 2}, {0, 2}, {3, 4}});
  Frontend fe(g);
  const WalkTrace t = bfs_crawl(fe, 0, 10, Rng(5));
  CHECK(t.length() == 3);
  CHECK(t.exhausted);
  const std::unordered_set<NodeId> seen(t.nodes.begin(), t.nodes.end());
  CHECK(seen == std::unordered_set<NodeId>{0, 1, 2});
}

TEST_CASE("bfs: invalid seed fails before any fetch") {
  const SocialGraph g = with_hidden(star4(), {1});
  Frontend fe(g);
  CHECK_THROWS_AS(bfs_crawl(fe, 1, 10, Rng(1)), Error);
  CHECK(fe.ledger().fetch_count == 0);
}

TEST_CASE("bfs: hidden neighbors are discovered but never expanded") {
  const SocialGraph g = with_hidden(
      SocialGraph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}}), {2});
  Frontend fe(g);
  const WalkTrace t = bfs_crawl(fe, 0, 10, Rng(1));
  CHECK(t.nodes == std::vector<NodeId>{0, 1});
  CHECK(t.invalid_skipped == 1);
  CHECK(t.exhausted);
}

TEST_CASE("rw: uniform visits on the 3-cycle") {
  const SocialGraph g = SocialGraph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
  Frontend fe(g);
  const WalkTrace t = rw_crawl(fe, 0, 100000, Rng(11));
  const auto counts = visit_counts(t, 3);
  const std::vector<double> expected(3, 100000.0 / 3.0);
  const GofResult gof = chi_square_gof(counts, expected);
  CHECK(gof.p_value > 0.01);
}

TEST_CASE("rw: path visit frequencies match k/2|E| and the matrix oracle") {
  const SocialGraph g = path3();
  Frontend fe(g);
  const WalkTrace t = rw_crawl(fe, 0, 100000, Rng(13));
  const auto counts = visit_counts(t, 3);
  const auto pi = oracle::stationary(oracle::rw_matrix(g));
  CHECK(pi[0] == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(pi[1] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(oracle::visit_tv(counts, pi) < 0.01);
}

TEST_CASE("rw: star frequencies are 1/2 center, 1/6 per leaf") {
  const SocialGraph g = star4();
  Frontend fe(g);
  const WalkTrace t = rw_crawl(fe, 1, 120000, Rng(17));
  const auto counts = visit_counts(t, 4);
  const auto pi = oracle::stationary(oracle::rw_matrix(g));
  CHECK(pi[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(pi[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-9));
  CHECK(oracle::visit_tv(counts, pi) < 0.01);
}

TEST_CASE("rw: stalls with an error when every neighbor is invalid") {
  const SocialGraph g = with_hidden(star4(), {1, 2, 3});
  Frontend fe(g);
  CHECK_THROWS_AS(rw_crawl(fe, 0, 100, Rng(1)), StallError);
}

TEST_CASE("mhrw: path transition matrix and uniform stationary vector") {
  const SocialGraph g = path3();
  const auto p = oracle::mhrw_matrix(g);
  CHECK(p[0][1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p[0][0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p[1][0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p[1][2] == doctest::Approx(0.5).epsilon(1e-15));
  const auto pi = oracle::stationary(p);
  for (double v : pi) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("mhrw: equals rw on a regular graph for the same stream") {
  const SocialGraph g = gen_synthetic(WattsStrogatz{40, 4, 0.0}, 2);  // 4-regular
  Frontend fe1(g), fe2(g);
  const WalkTrace a = mhrw_crawl(fe1, 5, 5000, Rng(23));
  const WalkTrace b = rw_crawl(fe2, 5, 5000, Rng(23));
  CHECK(a.nodes == b.nodes);
  CHECK(a.accepts == a.proposals);  // every proposal accepted
}

TEST_CASE("mhrw: star transitions and long-run uniformity") {
  const SocialGraph g = star4();
  const auto p = oracle::mhrw_matrix(g);
  CHECK(p[1][0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));  // leaf -> center
  CHECK(p[1][1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));  // stay
  const auto pi = oracle::stationary(p);
  for (double v : pi) CHECK(v == doctest::Approx(0.25).epsilon(1e-9));

  Frontend fe(g);
  const WalkTrace t = mhrw_crawl(fe, 1, 1000000, Rng(29));
  CHECK(oracle::visit_tv(visit_counts(t, 4), pi) < 0.01);

  // one-step empirical transition frequencies against the matrix rows
  std::map<NodeId, std::map<NodeId, double>> freq;
  std::map<NodeId, double> outs;
  for (std::size_t i = 0; i + 1 < t.length(); ++i) {
    freq[t.nodes[i]][t.nodes[i + 1]] += 1.0;
    outs[t.nodes[i]] += 1.0;
  }
  for (NodeId u = 0; u < 4; ++u) {
    for (NodeId w = 0; w < 4; ++w) {
      const double observed = freq[u][w] / outs[u];
      CHECK(observed == doctest::Approx(p[u][w]).epsilon(0.05).scale(1.0));
    }
  }
}

TEST_CASE("mhrw: invalid proposals backtrack, consume the iteration, and "
          "never enter the trace") {
  // path 0-1-2-3 with node 2 hidden; walk around 0-1
  const SocialGraph g = with_hidden(
      SocialGraph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}}), {2});
  Frontend fe(g);
  const WalkTrace t = mhrw_crawl(fe, 0, 20000, Rng(31));
  CHECK(t.length() == 20000);
  CHECK(t.backtracks > 0);
  for (NodeId v : t.nodes) CHECK(v != 2);
  std::size_t backtrack_events = 0;
  for (std::size_t i = 0; i < t.length(); ++i) {
    if (t.events[i] == WalkEvent::kBacktrack) {
      ++backtrack_events;
      CHECK(t.nodes[i] == t.nodes[i - 1]);  // stayed put
    }
  }
  CHECK(backtrack_events == t.backtracks);
  // 2 is excluded from 1's proposal set after the first discovery
  CHECK(t.backtracks == 1);
}

TEST_CASE("small-graph suite: symmetry and stationary vectors (n <= 6)") {
  // the acceptance suite runs the exhaustive 4-8 sweep; keep unit fast
  std::size_t counts[7] = {};
  for (int n = 4; n <= 6; ++n) {
    const auto graphs = oracle::connected_graphs(n);
    counts[n] = graphs.size();
    for (const auto& small : graphs) {
      const SocialGraph g = oracle::to_social(small);
      const auto p = oracle::mhrw_matrix(g);
      for (std::size_t u = 0; u < p.size(); ++u) {
        for (std::size_t w = 0; w < p.size(); ++w) {
          CHECK(std::abs(p[u][w] - p[w][u]) < 1e-15);
          if (u != w && p[u][w] > 0.0) {
            const double expected =
                std::min(1.0 / g.degree(static_cast<NodeId>(u)),
                         1.0 / g.degree(static_cast<NodeId>(w)));
            CHECK(p[u][w] == doctest::Approx(expected).epsilon(1e-15));
          }
        }
      }
      const auto pi = oracle::stationary(p);
      for (double v : pi) {
        CHECK(std::abs(v - 1.0 / static_cast<double>(g.node_count())) < 1e-9);
      }
      const auto rw_pi = oracle::stationary(oracle::rw_matrix(g));
      const double two_e = 2.0 * static_cast<double>(g.edge_count());
      for (std::size_t v = 0; v < rw_pi.size(); ++v) {
        CHECK(std::abs(rw_pi[v] - g.degree(static_cast<NodeId>(v)) / two_e) < 1e-9);
      }
    }
  }
  // known counts of connected graphs up to isomorphism
  CHECK(counts[4] == 6);
  CHECK(counts[5] == 21);
  CHECK(counts[6] == 112);
}

TEST_CASE("parallel chains: shape, distinct seeds, determinism") {
  const SocialGraph g = gen_synthetic(BarabasiAlbert{500, 3}, 41);
  Frontend fe(g);
  std::vector<NodeId> seeds;
  for (NodeId v = 0; v < 28; ++v) seeds.push_back(v);
  const ChainSet set = run_parallel_chains(fe, Method::kMhrw, seeds, 1000, 99);
  CHECK(set.traces.size() == 28);
  for (const auto& t : set.traces) CHECK(t.length() == 1000);

  // bit-identical under sequential execution
  Frontend fe2(g);
  const ChainSet seq =
      run_parallel_chains(fe2, Method::kMhrw, seeds, 1000, 99, /*parallel=*/false);
  for (std::size_t i = 0; i < 28; ++i) {
    CHECK(set.traces[i].nodes == seq.traces[i].nodes);
  }

  CHECK_THROWS_AS(run_parallel_chains(fe, Method::kMhrw,
                                      std::vector<NodeId>{1, 1}, 10, 1),
                  Error);
}

TEST_CASE("parallel chains: single chain degenerates to the direct crawl") {
  const SocialGraph g = gen_synthetic(BarabasiAlbert{300, 3}, 43);
  Frontend fe(g);
  const std::vector<NodeId> seeds{7};
  const ChainSet set = run_parallel_chains(fe, Method::kMhrw, seeds, 2000, 77);
  Frontend fe2(g);
  const WalkTrace direct = mhrw_crawl(fe2, 7, 2000, Rng(77).stream(0), 0);
  CHECK(set.traces[0].nodes == direct.nodes);
}

TEST_CASE("uni: occupancy one means every probe accepts") {
  SocialGraph g = gen_synthetic(ErdosRenyi{100, 0.1}, 3);
  g = largest_component(g);
  AttributePlantSpec spec;
  spec.id_space = g.node_count();  // fully dense id space
  plant_attributes(g, spec, 5);
  Frontend fe(g);
  const UniResult r = uni_sample(fe, 500, Rng(7));
  CHECK(r.probes == 500);
  CHECK(r.nodes.size() == 500);
}

TEST_CASE("uni: 1-in-22 occupancy costs about 22 probes per accept") {
  SocialGraph g = gen_synthetic(BarabasiAlbert{1000, 3}, 3);
  AttributePlantSpec spec;
  spec.id_space = 22 * 1000;
  plant_attributes(g, spec, 5);
  Frontend fe(g);
  const UniResult r = uni_sample(fe, 2000, Rng(7));
  CHECK(r.probes_per_accept() == doctest::Approx(22.0).epsilon(0.15));
}

TEST_CASE("uni: isolated and hidden users are discarded") {
  // edge 0-1 plus isolated 2; node 1 hides its list
  SocialGraph g = with_hidden(SocialGraph::from_edges(3, {{0, 1}}), {1});
  g.set_id_space(3);  // ids 1..3 planted by default attributes
  Frontend fe(g);
  const UniResult r = uni_sample(fe, 50, Rng(9));
  CHECK(r.probes > 50);  // rejections happened
  for (NodeId v : r.nodes) CHECK(v == 0);
}

TEST_CASE("uni: probe cap aborts a pathological configuration") {
  SocialGraph g = with_hidden(SocialGraph::from_edges(2, {{0, 1}}), {0, 1});
  Frontend fe(g);
  CHECK_THROWS_WITH_AS(uni_sample(fe, 1, Rng(1)),
                       doctest::Contains("probe cap"), Error);
}

TEST_CASE("uni: draws are uniform over the valid ids") {
  SocialGraph g = gen_synthetic(ErdosRenyi{200, 0.08}, 13);
  g = largest_component(g);
  AttributePlantSpec spec;
  spec.id_space = 50 * g.node_count();
  plant_attributes(g, spec, 15);
  Frontend fe(g);
  const UniResult r = uni_sample(fe, 20000, Rng(17));
  std::vector<std::uint64_t> counts(g.node_count(), 0);
  for (NodeId v : r.nodes) ++counts[v];
  const std::vector<double> expected(
      g.node_count(), 20000.0 / static_cast<double>(g.node_count()));
  CHECK(chi_square_gof(counts, expected).p_value > 0.01);
}

TEST_CASE("subsample: boundary, identity and exhaustion") {
  const SocialGraph g = gen_synthetic(BarabasiAlbert{200, 3}, 51);
  Frontend fe(g);
  std::vector<NodeId> seeds{0, 1, 2};
  const ChainSet set = run_parallel_chains(fe, Method::kMhrw, seeds, 100, 3);

  // burn_in = budget - 1: only the last position of each chain is eligible
  const auto last = subsample_trace(set, 99, 3, Rng(1));
  std::multiset<NodeId> expect_last, got_last(last.begin(), last.end());
  for (const auto& t : set.traces) expect_last.insert(t.nodes.back());
  CHECK(got_last == expect_last);

  // target = all eligible returns the pooled post-burn-in multiset
  const auto all = subsample_trace(set, 40, 3 * 60, Rng(2));
  const auto pooled = set.pooled_nodes(40);
  CHECK(std::multiset<NodeId>(all.begin(), all.end()) ==
        std::multiset<NodeId>(pooled.begin(), pooled.end()));

  CHECK_THROWS_AS(subsample_trace(set, 40, 3 * 60 + 1, Rng(3)), Error);
  CHECK_THROWS_AS(subsample_trace(set, 100, 1, Rng(3)), Error);
}

TEST_CASE("trace dump and parse round-trip") {
  const SocialGraph g = with_hidden(
      SocialGraph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}), {3});
  Frontend fe(g);
  std::vector<NodeId> seeds{0, 1};
  ChainSet set = run_parallel_chains(fe, Method::kMhrw, seeds, 200, 7);
  std::ostringstream out;
  dump_traces(set, g, out);
  std::istringstream in(out.str());
  const ChainSet back = parse_traces(in, "mem", g);
  REQUIRE(back.traces.size() == set.traces.size());
  for (std::size_t i = 0; i < set.traces.size(); ++i) {
    CHECK(back.traces[i].nodes == set.traces[i].nodes);
    CHECK(back.traces[i].events == set.traces[i].events);
  }
}

TEST_CASE("walk seeds must be crawlable") {
  const SocialGraph g = with_hidden(star4(), {1});
  Frontend fe(g);
  CHECK_THROWS_AS(mhrw_crawl(fe, 1, 10, Rng(1)), Error);
  CHECK_THROWS_AS(rw_crawl(fe, 1, 10, Rng(1)), Error);
  // isolated node is no seed either
  const SocialGraph g2 = SocialGraph::from_edges(3, {{0, 1}});
  Frontend fe2(g2);
  CHECK_THROWS_AS(mhrw_crawl(fe2, 2, 10, Rng(1)), Error);
}
