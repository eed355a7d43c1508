#include <gtest/gtest.h>

#include <random>

#include "circuitkit/claims.hpp"
#include "circuitkit/coloring.hpp"

using namespace circuitkit;
using namespace circuitkit::coloring;

namespace {

Coloring col(std::vector<int> a, int t) { return Coloring{std::move(a), t}; }

std::size_t adjacent_pairs(const ReconfigurationGraph& r) { return r.edges.size(); }

}  // namespace

TEST(ColoringSystem, Shape) {
  auto s = coloring_system(complete_graph(3), 3);
  EXPECT_EQ(s.n(), 9u);
  EXPECT_EQ(s.m_A(), 3u);
  EXPECT_EQ(s.m_B(), 18u);
  EXPECT_THROW(coloring_system(complete_graph(3), 0), Error);
}

TEST(ColoringSystem, CharVectorRoundTrip) {
  const Graph g = triangular_prism();
  for (const auto& c : proper_colorings(g, 3)) {
    auto x = char_vector(c);
    EXPECT_TRUE(is_feasible(coloring_system(g, 3), x));
    EXPECT_EQ(decode(x, g.vertex_count(), 3), c);
  }
  RatVector half(6, 0);
  half[0] = half[1] = Rational(1, 2);
  EXPECT_THROW(decode(half, 2, 3), Error);
}

TEST(Difference, ConnectedDifferenceIsCircuit) {
  const Graph p = path_graph(3);
  auto a = col({0, 1, 0}, 3), b = col({1, 0, 1}, 3), c = col({2, 1, 2}, 3);
  EXPECT_TRUE(difference_is_circuit(p, a, b).is_circuit);
  // two separate changes at the ends of the path
  EXPECT_FALSE(difference_is_circuit(p, a, c).is_circuit);
  EXPECT_THROW(difference_is_circuit(p, a, a), Error);
  EXPECT_THROW(difference_is_circuit(p, a, col({0, 0, 1}, 3)), Error);
}

TEST(Kempe, ChainsOnPath) {
  const Graph p = path_graph(3);
  auto c = col({0, 1, 0}, 3);
  auto ab = kempe_chains(p, c, {0, 1});
  ASSERT_EQ(ab.size(), 1u);
  EXPECT_EQ(ab[0].vertices, (std::vector<int>{0, 1, 2}));
  auto ac = kempe_chains(p, c, {0, 2});
  EXPECT_EQ(ac.size(), 2u);
  EXPECT_THROW(kempe_chains(p, c, {0, 0}), Error);
  EXPECT_THROW(kempe_chains(p, c, {0, 5}), Error);
}

TEST(Kempe, GeneralizedSwapConditions) {
  const Graph p = path_graph(3);
  auto c = col({0, 1, 0}, 3);
  KempeChain whole{{0, 1}, {0, 1, 2}};
  EXPECT_EQ(apply_generalized_swap(p, c, whole, {{0, 1}, {1, 0}, {2, 1}}), col({1, 0, 1}, 3));
  KempeChain left{{0, 2}, {0}};
  try {
    apply_generalized_swap(p, c, left, {{0, 2}, {2, 2}});
    FAIL();
  } catch (const SwapFailure& f) {
    EXPECT_EQ(f.condition(), 1);
  }
  try {
    apply_generalized_swap(p, c, whole, {{0, 1}, {1, 0}});
    FAIL();
  } catch (const SwapFailure& f) {
    EXPECT_EQ(f.condition(), 2);
  }
  KempeChain fake{{0, 1}, {0, 1}};
  EXPECT_THROW(apply_generalized_swap(p, c, fake, {{0, 1}, {1, 0}}), Error);
}

TEST(Reconfiguration, PrismKempeDisconnectedCircuitConnected) {
  const Graph g = triangular_prism();
  auto kempe = reconfiguration_graph(g, 3, Adjacency::KempeTwoColor);
  auto circ = reconfiguration_graph(g, 3, Adjacency::Circuit);
  EXPECT_EQ(kempe.nodes.size(), 12u);
  EXPECT_EQ(kempe.components, 2u);
  EXPECT_EQ(circ.components, 1u);
  EXPECT_EQ(adjacent_pairs(circ), 66u);
}

TEST(Reconfiguration, K4FourColors) {
  auto r = reconfiguration_graph(complete_graph(4), 4, Adjacency::Circuit);
  EXPECT_EQ(r.nodes.size(), 24u);
  EXPECT_EQ(adjacent_pairs(r), 240u);
}

TEST(ProperWalk, DisjointPalettesNeedNSteps) {
  auto w2 = proper_walk_bfs(complete_graph(2), 4, col({0, 1}, 4), col({2, 3}, 4));
  EXPECT_EQ(w2.length(), 2u);
  auto w3 = proper_walk_bfs(complete_graph(3), 6, col({0, 1, 2}, 6), col({3, 4, 5}, 6));
  EXPECT_EQ(w3.length(), 3u);
  EXPECT_FALSE(validate_walk(coloring_system(complete_graph(3), 6), w3.trace));
}

TEST(ProperWalk, SingleStepAndSameColoring) {
  const Graph p = path_graph(3);
  auto a = col({0, 1, 0}, 3);
  EXPECT_EQ(proper_walk_bfs(p, 3, a, a).length(), 0u);
  EXPECT_EQ(proper_walk_bfs(p, 3, a, col({1, 0, 1}, 3)).length(), 1u);
}

TEST(TwoStep, RotationExamples) {
  const Graph k4 = complete_graph(4);
  auto c1 = col({0, 1, 2, 3}, 4);
  auto w = two_step_construction(k4, c1, col({1, 0, 3, 2}, 4));
  EXPECT_EQ(w.length(), 2u);
  EXPECT_FALSE(validate_walk(coloring_system(k4, 4), w.trace));
  EXPECT_EQ(two_step_construction(k4, c1, c1).length(), 0u);
  EXPECT_THROW(two_step_construction(path_graph(3), col({0, 1, 2}, 3), col({1, 2, 0}, 3)), Error);
}

// Every pair of n-colorings of K_n is joined by a validated walk of length <= 2,
// and no pair lies at circuit distance more than two.
TEST(TwoStep, AllPairsOnSmallCompleteGraphs) {
  for (int n : {3, 4}) {
    const Graph g = complete_graph(n);
    const auto sys = coloring_system(g, n);
    const auto cs = proper_colorings(g, n);
    for (const auto& a : cs)
      for (const auto& b : cs) {
        auto w = two_step_construction(g, a, b);
        ASSERT_LE(w.length(), 2u);
        EXPECT_EQ(w.colorings.front(), a);
        EXPECT_EQ(w.colorings.back(), b);
        if (w.length() > 0) EXPECT_FALSE(validate_walk(sys, w.trace));
      }
  }
}

// The combinatorial test agrees with the exact oracle on every pair of proper
// 3-colorings of connected graphs with at most 4 vertices.
TEST(ColoringProperty, DifferenceCharacterisationCounts) {
  std::size_t pairs = 0, circuits = 0;
  for (const auto& g : claims::graphs_upto(4, true)) {
    const auto sys = coloring_system(g, 3);
    const auto cs = proper_colorings(g, 3);
    for (std::size_t i = 0; i < cs.size(); ++i)
      for (std::size_t j = i + 1; j < cs.size(); ++j) {
        ++pairs;
        const bool fast = difference_is_circuit(g, cs[i], cs[j]).is_circuit;
        const bool exact = is_circuit(sys, difference(cs[i], cs[j])).is_circuit();
        EXPECT_EQ(fast, exact);
        circuits += exact;
      }
  }
  EXPECT_EQ(pairs, 885u);
  EXPECT_EQ(circuits, 753u);
}

TEST(ColoringProperty, CircuitGraphConnectedAboveChromaticNumber) {
  for (const auto& g : claims::graphs_upto(5, true)) {
    const int chi = coloring::detail::chromatic_number(g);
    for (int t = chi; t <= chi + 1; ++t)
      EXPECT_TRUE(reconfiguration_graph(g, t, Adjacency::Circuit).connected()) << g.edge_count() << " edges, t=" << t;
  }
}

// A single circuit step on K_n introduces at most one color unused before it.
TEST(ColoringProperty, OneNewColorPerStepOnCompleteGraphs) {
  for (auto [n, t] : std::vector<std::pair<int, int>>{{2, 4}, {3, 6}, {3, 5}}) {
    const Graph g = complete_graph(n);
    for (const auto& c : proper_colorings(g, t)) {
      std::set<int> before(c.assignment.begin(), c.assignment.end());
      for (const auto& st : feasible_01_circuits_at(g, c)) {
        int fresh = 0;
        for (int x : std::set<int>(st.target.assignment.begin(), st.target.assignment.end())) fresh += !before.count(x);
        EXPECT_LE(fresh, 1);
      }
    }
  }
}

TEST(ColoringProperty, CircuitStepsAreSoundSwaps) {
  std::mt19937_64 rng(3);
  for (const Graph& g : {triangular_prism(), cycle_graph(5), complete_graph(4), star_graph(3)}) {
    const int t = coloring::detail::chromatic_number(g) + 1;
    const auto sys = coloring_system(g, t);
    auto cs = proper_colorings(g, t);
    std::shuffle(cs.begin(), cs.end(), rng);
    cs.resize(std::min<std::size_t>(cs.size(), 6));
    for (const auto& c : cs)
      for (const auto& st : feasible_01_circuits_at(g, c)) {
        EXPECT_TRUE(is_proper(g, st.target));
        EXPECT_FALSE(validate_walk(sys, step_trace(c, st.target)));
        std::uint64_t mask = 0;
        for (int v = 0; v < g.vertex_count(); ++v)
          if (st.target[v] != c[v]) mask |= std::uint64_t(1) << v;
        EXPECT_TRUE(vertex_set_connected(g, mask));
        for (int v = 0; v < g.vertex_count(); ++v)
          if (st.target[v] != c[v]) EXPECT_TRUE(std::binary_search(st.chain.vertices.begin(), st.chain.vertices.end(), v));
      }
  }
}
