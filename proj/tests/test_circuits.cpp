#include <gtest/gtest.h>

#include "circuitkit/forest.hpp"
#include "circuitkit/gadgets.hpp"
#include "support.hpp"

using namespace circuitkit;

namespace {

IntVector iv(std::initializer_list<long> xs) {
  IntVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

ConstraintSystem box(std::size_t n, long lo = 0, long hi = 1) {
  ConstraintSystem s(n);
  for (std::size_t i = 0; i < n; ++i) {
    RatVector up(n, 0), down(n, 0);
    up[i] = 1;
    down[i] = -1;
    s.add_inequality(up, hi);
    s.add_inequality(down, -lo);
  }
  return s;
}

}  // namespace

TEST(IsCircuit, UnitVectorOnTriangleIsCircuit) {
  auto sys = forest::rank_system(complete_graph(3));
  EXPECT_TRUE(is_circuit(sys, iv({1, 0, 0})).is_circuit());
}

TEST(IsCircuit, TwoPositiveEntriesGiveUnitWitness) {
  for (const Graph& g : {complete_graph(3), path_graph(4), complete_graph(4), cycle_graph(5)}) {
    auto sys = forest::rank_system(g);
    RatVector x(static_cast<std::size_t>(g.edge_count()), 0);
    x[0] = x[1] = 1;
    auto d = is_circuit(sys, x);
    ASSERT_EQ(d.verdict, CircuitDecision::Verdict::NotCircuit);
    EXPECT_EQ(support(d.witness).size(), 1u);
    EXPECT_TRUE(test_support::witness_reduces(sys, x, d.witness));
  }
}

TEST(IsCircuit, DifferenceOfFarUnitVectorsIsCircuit) {
  const Graph g = graph_from_edges(4, {{0, 1}, {2, 3}});
  EXPECT_TRUE(is_circuit(forest::rank_system(g), iv({1, -1})).is_circuit());
  const Graph h = graph_from_edges(6, {{0, 1}, {1, 2}, {3, 4}, {4, 5}});
  EXPECT_TRUE(is_circuit(forest::rank_system(h), iv({1, 0, 0, -1})).is_circuit());
}

TEST(IsCircuit, NotInKernelAndZero) {
  ConstraintSystem s = box(3);
  s.add_equality(RatVector{1, 1, 1}, 1);
  EXPECT_EQ(is_circuit(s, iv({1, 0, 0})).verdict, CircuitDecision::Verdict::NotInKernel);
  EXPECT_THROW(is_circuit(s, iv({0, 0, 0})), Error);
  EXPECT_THROW(is_circuit(s, iv({1, -1})), Error);
}

TEST(Imbalance, Examples) {
  std::vector<Circuit> unit{{iv({1, 0}), {}}, {iv({1, -1}), {}}};
  EXPECT_EQ(imbalance(unit).kappa, 1);
  unit.push_back({iv({2, -2, 1}), {}});
  auto r = imbalance(unit);
  EXPECT_GE(r.kappa, 2);
  EXPECT_EQ(r.witness_circuit.vector, iv({2, -2, 1}));
  EXPECT_THROW(imbalance({}), Error);
}

TEST(FeasibleCircuits, OriginOfForestPolytopeSeesOnlyUnitVectors) {
  const Graph g = complete_graph(3);
  auto sys = forest::mwf_system(g);
  auto pool = enumerate_circuits(sys);
  auto fc = feasible_circuits_at(sys, RatVector(3, 0), pool);
  ASSERT_EQ(fc.size(), 3u);
  for (const auto& c : fc) {
    EXPECT_EQ(c.sign, 1);
    EXPECT_EQ(support(c.circuit.vector).size(), 1u);
  }
}

TEST(FeasibleCircuits, InteriorPointAllowsBothSigns) {
  auto sys = box(2);
  auto pool = enumerate_circuits(sys);
  auto fc = feasible_circuits_at(sys, RatVector{Rational(1, 2), Rational(1, 3)}, pool);
  EXPECT_EQ(fc.size(), 2 * pool.size());
}

TEST(FeasibleCircuits, SpanningTreeOfTriangleHasNoPositiveStep) {
  const Graph g = complete_graph(3);
  auto sys = forest::mwf_system(g);
  auto pool = enumerate_circuits(sys);
  EXPECT_EQ(pool.size(), 6u);
  std::size_t positive = 0;
  for (const auto& fc : feasible_circuits_at(sys, RatVector{1, 1, 0}, pool)) {
    IntVector d = fc.direction();
    if (std::all_of(d.begin(), d.end(), [](const Integer& z) { return z >= 0; })) {
      auto m = max_step(sys, RatVector{1, 1, 0}, d);
      if (!m || *m > 0) ++positive;
    }
  }
  EXPECT_EQ(positive, 0u);
}

TEST(MaxStep, UnitEdgeFromOriginHasLengthOne) {
  auto sys = forest::mwf_system(complete_graph(4));
  for (int e = 0; e < 6; ++e) {
    IntVector g(6, 0);
    g[static_cast<std::size_t>(e)] = 1;
    EXPECT_EQ(max_step(sys, RatVector(6, 0), g), Rational(1));
  }
}

TEST(MaxStep, BoxAndRecession) {
  auto sys = box(2);
  EXPECT_EQ(max_step(sys, RatVector{Rational(1, 4), Rational(1, 2)}, iv({1, 0})), Rational(3, 4));
  ConstraintSystem orthant(2);
  orthant.add_inequality(RatVector{-1, 0}, 0);
  orthant.add_inequality(RatVector{0, -1}, 0);
  EXPECT_FALSE(max_step(orthant, RatVector{0, 0}, iv({1, 1})).has_value());
  EXPECT_THROW(max_step(orthant, RatVector{0, 0}, iv({-1, 0})), Error);
}

TEST(WalkBfs, TrivialAndSingleStep) {
  auto sys = forest::mwf_system(complete_graph(3));
  auto pool = enumerate_circuits(sys);
  auto w0 = walk_bfs(sys, RatVector(3, 0), RatVector(3, 0), pool);
  ASSERT_EQ(w0.status, WalkSearch::Status::Found);
  EXPECT_EQ(w0.trace->length(), 0u);
  auto w1 = walk_bfs(sys, RatVector(3, 0), RatVector{0, 1, 0}, pool);
  ASSERT_EQ(w1.status, WalkSearch::Status::Found);
  EXPECT_EQ(w1.trace->length(), 1u);
  EXPECT_FALSE(validate_walk(sys, *w1.trace));
}

TEST(WalkBfs, SpanningTreeNeedsThreeSteps) {
  const Graph g = complete_graph(4);
  auto sys = forest::mwf_system(g);
  auto pool = enumerate_circuits(sys);
  auto F = forest::forest_vector(g, {0, 1, 2});
  auto w = walk_bfs(sys, RatVector(6, 0), F, pool);
  ASSERT_EQ(w.status, WalkSearch::Status::Found);
  EXPECT_EQ(w.trace->length(), 3u);
  EXPECT_FALSE(validate_walk(sys, *w.trace));
}

TEST(WalkBfs, DepthCapReported) {
  const Graph g = complete_graph(4);
  auto sys = forest::mwf_system(g);
  auto pool = enumerate_circuits(sys);
  WalkSearchOptions o;
  o.depth_cap = 2;
  auto w = walk_bfs(sys, RatVector(6, 0), forest::forest_vector(g, {0, 1, 2}), pool, o);
  EXPECT_EQ(w.status, WalkSearch::Status::CapExceeded);
}

TEST(ValidateWalk, DetectsShortStepAndNonCircuit) {
  const Graph g = complete_graph(4);
  auto sys = forest::mwf_system(g);
  auto pool = enumerate_circuits(sys);
  auto w = walk_bfs(sys, RatVector(6, 0), forest::forest_vector(g, {0, 1, 2}), pool);
  ASSERT_TRUE(w.trace && w.trace->length() >= 2);

  WalkTrace halved = *w.trace;
  halved.points.resize(3);
  halved.circuits_used.resize(2);
  halved.step_lengths.resize(2);
  halved.step_lengths[1] /= 2;
  halved.points[2] = advance(halved.points[1], halved.step_lengths[1], halved.circuits_used[1]);
  auto v = validate_walk(sys, halved);
  ASSERT_TRUE(v);
  EXPECT_EQ(v->message, "step 1 not maximal");

  WalkTrace bad;
  bad.points = {RatVector(6, 0), RatVector{1, 1, 0, 0, 0, 0}};
  bad.circuits_used = {iv({1, 1, 0, 0, 0, 0})};
  bad.step_lengths = {1};
  auto v2 = validate_walk(sys, bad);
  ASSERT_TRUE(v2);
  EXPECT_EQ(v2->message, "g_0 not a circuit");
}

// Whenever the unrestricted shortest walk only visits integral points, the
// integral-only search finds a walk of the same length.
TEST(WalkBfsProperty, IntegralRestrictionAgreesOnIntegralWalks) {
  std::mt19937_64 rng(99);
  std::size_t compared = 0;
  for (const Graph& g : {complete_graph(3), path_graph(4), cycle_graph(4), star_graph(3), complete_graph(4)}) {
    auto sys = forest::mwf_system(g);
    auto pool = enumerate_circuits(sys);
    for (int t = 0; t < 6; ++t) {
      auto F1 = forest::random_forest(g, rng), F2 = forest::random_forest(g, rng);
      RatVector a = forest::forest_vector(g, F1), b = forest::forest_vector(g, F2);
      auto free = walk_bfs(sys, a, b, pool);
      ASSERT_EQ(free.status, WalkSearch::Status::Found);
      if (!std::all_of(free.trace->points.begin(), free.trace->points.end(),
                       [](const RatVector& p) { return is_integral(p); }))
        continue;
      WalkSearchOptions o;
      o.integral_only = true;
      auto integral = walk_bfs(sys, a, b, pool, o);
      ASSERT_EQ(integral.status, WalkSearch::Status::Found);
      EXPECT_EQ(integral.trace->length(), free.trace->length());
      ++compared;
    }
  }
  auto z = gadgets::zigzag_system({2, 1});
  auto pool = enumerate_circuits(z.system);
  for (std::size_t i = 0; i < z.vertices.size(); ++i)
    for (std::size_t j = 0; j < z.vertices.size(); ++j) {
      auto free = walk_bfs(z.system, z.vertices[i], z.vertices[j], pool);
      ASSERT_EQ(free.status, WalkSearch::Status::Found);
      WalkSearchOptions o;
      o.integral_only = true;
      auto integral = walk_bfs(z.system, z.vertices[i], z.vertices[j], pool, o);
      if (std::all_of(free.trace->points.begin(), free.trace->points.end(),
                      [](const RatVector& p) { return is_integral(p); })) {
        EXPECT_EQ(integral.trace->length(), free.trace->length());
        ++compared;
      }
    }
  EXPECT_GT(compared, 20u);
}
