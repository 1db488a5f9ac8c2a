#include <gtest/gtest.h>

#include <bit>
#include <map>
#include <numeric>
#include <set>

#include "elect/mixing.hpp"
#include "elect/topology.hpp"

using namespace elect;

namespace {

Topology star(std::size_t leaves) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
  return Topology::from_edges(leaves + 1, edges);
}

void expect_structurally_valid(const Topology& t) {
  EXPECT_NO_THROW(t.validate());
  for (NodeId u = 0; u < t.size(); ++u) {
    std::set<NodeId> seen(t.port_map(u).begin(), t.port_map(u).end());
    EXPECT_EQ(seen.size(), t.degree(u));
    for (Port p = 0; p < t.degree(u); ++p) EXPECT_EQ(t.neighbor(t.neighbor(u, p), t.return_port(u, p)), u);
  }
}

}  // namespace

TEST(Topology, CompleteGraphs) {
  auto k4 = make_complete(4);
  EXPECT_EQ(k4.size(), 4u);
  EXPECT_EQ(k4.edge_count(), 6u);
  for (NodeId u = 0; u < 4; ++u) EXPECT_EQ(k4.degree(u), 3u);
  EXPECT_FALSE(k4.bipartite());
  EXPECT_FALSE(k4.lazy());

  auto k2 = make_complete(2);
  EXPECT_EQ(k2.edge_count(), 1u);
  EXPECT_TRUE(k2.bipartite());

  auto k1024 = make_complete(1024);
  EXPECT_EQ(k1024.edge_count(), 523776u);
  EXPECT_TRUE(k1024.is_complete());
}

TEST(Topology, CompleteRejectsTinySizes) {
  for (std::size_t n : {0, 1}) {
    try {
      make_complete(n);
      FAIL() << "n=" << n << " accepted";
    } catch (const error& e) {
      EXPECT_EQ(e.code(), errc::invalid_size);
    }
  }
}

TEST(Topology, Hypercubes) {
  auto q1 = make_hypercube(1);
  EXPECT_EQ(q1.size(), 2u);
  EXPECT_EQ(q1.edge_count(), 1u);

  auto q3 = make_hypercube(3);
  EXPECT_EQ(q3.size(), 8u);
  for (NodeId u = 0; u < 8; ++u) {
    EXPECT_EQ(q3.degree(u), 3u);
    for (NodeId v : q3.neighbors(u)) EXPECT_EQ(std::popcount(u ^ v), 1);
  }
  EXPECT_TRUE(q3.bipartite());
  EXPECT_TRUE(q3.lazy());

  auto q10 = make_hypercube(10);
  EXPECT_EQ(q10.size(), 1024u);
  EXPECT_EQ(q10.degree(17), 10u);

  EXPECT_THROW(make_hypercube(0), error);
  try {
    make_hypercube(40);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::invalid_size);
  }
}

TEST(Topology, Cycles) {
  auto c3 = make_cycle(3);
  EXPECT_EQ(c3.edge_count(), 3u);
  EXPECT_EQ(c3.neighbors(0), (std::vector<NodeId>{1, 2}));
  EXPECT_FALSE(c3.bipartite());
  EXPECT_FALSE(c3.lazy());

  auto c4 = make_cycle(4);
  EXPECT_TRUE(c4.bipartite());
  EXPECT_TRUE(c4.lazy());

  EXPECT_THROW(make_cycle(2), error);
}

TEST(Topology, RandomRegular) {
  auto g = make_random_regular(10, 3, 7);
  expect_structurally_valid(g);
  for (NodeId u = 0; u < 10; ++u) EXPECT_EQ(g.degree(u), 3u);
  EXPECT_EQ(g.edge_count(), 15u);

  auto big = make_random_regular(1024, 8, 1);
  for (NodeId u = 0; u < big.size(); ++u) ASSERT_EQ(big.degree(u), 8u);
  EXPECT_TRUE(big.connected());

  EXPECT_EQ(to_text(make_random_regular(10, 3, 7)), to_text(g));
}

TEST(Topology, RandomRegularRejectsBadParameters) {
  auto code_of = [](auto&& f) {
    try {
      f();
    } catch (const error& e) {
      return e.code();
    }
    return errc::config;
  };
  EXPECT_EQ(code_of([] { make_random_regular(9, 3, 1); }), errc::invalid_size);   // odd n*d
  EXPECT_EQ(code_of([] { make_random_regular(10, 2, 1); }), errc::invalid_size);  // d < 3
  EXPECT_EQ(code_of([] { make_random_regular(4, 4, 1); }), errc::invalid_size);   // d >= n
  // K_4 is the only 3-regular graph on 4 nodes; zero attempts always fail
  EXPECT_EQ(code_of([] { make_random_regular(4, 3, 1, 0); }), errc::generation_failure);
}

TEST(Topology, FromEdgesRejectsBrokenInput) {
  EXPECT_THROW(Topology::from_edges(3, {{0, 1}}), error);          // disconnected
  EXPECT_THROW(Topology::from_edges(2, {{0, 0}}), error);          // loop
  EXPECT_THROW(Topology::from_edges(2, {{0, 1}, {1, 0}}), error);  // multi-edge
  EXPECT_NO_THROW(Topology::from_edges(1, {}));
}

TEST(Topology, RandomPortsAreDeterministicBijections) {
  auto k3 = make_complete(3);
  auto a = assign_random_ports(k3, 1);
  auto b = assign_random_ports(k3, 1);
  EXPECT_EQ(a, b);
  expect_structurally_valid(a);

  auto k64 = make_complete(64);
  auto p1 = assign_random_ports(k64, 1);
  auto p2 = assign_random_ports(k64, 2);
  expect_structurally_valid(p1);
  EXPECT_NE(p1.port_map(0), p2.port_map(0));

  // a leaf has exactly one possible port map
  auto s = assign_random_ports(star(3), 99);
  EXPECT_EQ(s.port_map(1), (std::vector<NodeId>{0}));
}

TEST(Topology, PortMapsAreRoughlyUniform) {
  // Over many seeds, node 0 of K_4 should see each of its 3! port maps.
  auto k4 = make_complete(4);
  std::map<std::vector<NodeId>, int> counts;
  const int draws = 6000;
  for (int s = 0; s < draws; ++s) ++counts[assign_random_ports(k4, static_cast<std::uint64_t>(s)).port_map(0)];
  ASSERT_EQ(counts.size(), 6u);
  for (const auto& [perm, c] : counts) EXPECT_NEAR(c, draws / 6, 150);
}

TEST(Topology, RejectsNonBijectivePortMap) {
  auto k3 = make_complete(3);
  EXPECT_THROW(k3.with_ports({{1, 1}, {0, 2}, {0, 1}}), error);
}

TEST(Topology, StationaryDistribution) {
  auto k4 = stationary_distribution(make_complete(4));
  for (double p : k4) EXPECT_DOUBLE_EQ(p, 0.25);

  auto s = stationary_distribution(star(3));
  EXPECT_DOUBLE_EQ(s[0], 0.5);
  for (int i = 1; i <= 3; ++i) EXPECT_DOUBLE_EQ(s[i], 1.0 / 6.0);

  for (double p : stationary_distribution(make_cycle(5))) EXPECT_DOUBLE_EQ(p, 0.2);
}

TEST(Topology, StationaryIsAFixedPointOfPlainAndLazySteps) {
  std::vector<Topology> graphs{make_complete(7), make_cycle(9), make_hypercube(4), star(5),
                               make_random_regular(40, 5, 3),
                               Topology::from_edges(5, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}})};
  for (const auto& t : graphs) {
    auto pi = stationary_distribution(t);
    EXPECT_NEAR(std::accumulate(pi.begin(), pi.end(), 0.0), 1.0, 1e-12);
    for (bool lazy : {false, true}) {
      auto next = transition(t, pi, lazy);
      for (std::size_t i = 0; i < pi.size(); ++i) EXPECT_NEAR(next[i], pi[i], 1e-10);
    }
  }
}

TEST(Topology, LazyStepHalvesMovingMass) {
  auto t = make_cycle(5);
  std::vector<double> e0(5, 0.0);
  e0[0] = 1.0;
  auto plain = transition(t, e0, false);
  auto lazy = transition(t, e0, true);
  EXPECT_DOUBLE_EQ(lazy[0], 0.5);
  EXPECT_DOUBLE_EQ(lazy[1], plain[1] / 2);
  EXPECT_DOUBLE_EQ(lazy[4], plain[4] / 2);
}

TEST(Topology, CanonicalTextRoundTrips) {
  std::vector<Topology> graphs{assign_random_ports(make_complete(6), 3), assign_random_ports(make_hypercube(3), 4),
                               make_cycle(4).with_lazy(false), Topology::from_edges(1, {})};
  for (const auto& t : graphs) {
    const auto text = to_text(t);
    const auto back = topology_from_text(text);
    EXPECT_EQ(back, t);
    EXPECT_EQ(to_text(back), text);
  }
  EXPECT_EQ(to_text(make_cycle(3)),
            "elect-topology 1\nn 3\nlazy 0\nedges 3\n0 1\n0 2\n1 2\nport 0 1 2\nport 1 0 2\nport 2 0 1\n");
}

TEST(Topology, ParserRejectsGarbage) {
  EXPECT_THROW(topology_from_text("not a topology"), error);
  EXPECT_THROW(topology_from_text("elect-topology 1\nn 3\nlazy 0\nedges 3\n0 1\n"), error);
  try {
    topology_from_text("elect-topology 1\nn 2\nlazy 0\nedges 1\n0 1\nport 0 1\nport 1 1\n");
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::precondition);
  }
}
