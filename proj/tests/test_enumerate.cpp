#include <gtest/gtest.h>

#include "circuitkit/gadgets.hpp"
#include "support.hpp"

using namespace circuitkit;
using circuitkit::test_support::circuit_set;

namespace {

IntVector iv(std::initializer_list<long> xs) {
  IntVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

ConstraintSystem from_rows(std::size_t n, const std::vector<RatVector>& B, const std::vector<RatVector>& A = {}) {
  ConstraintSystem s(n);
  for (const auto& r : A) s.add_equality(r, 0);
  for (const auto& r : B) s.add_inequality(r, 0);
  return s;
}

// Vertices of a bounded system by solving every n-subset of rows.
std::vector<RatVector> vertices(const ConstraintSystem& s) {
  const std::size_t n = s.n(), m = s.m_B();
  std::set<std::string> seen;
  std::vector<RatVector> out;
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (pick.size() + s.m_A() == n) {
      RatMatrix M(0, n + 1);
      for (std::size_t r = 0; r < s.m_A(); ++r) {
        RatVector row(s.A.row(r).begin(), s.A.row(r).end());
        row.push_back(-s.b[r]);
        M.append_row(row);
      }
      for (auto r : pick) {
        RatVector row(s.B.row(r).begin(), s.B.row(r).end());
        row.push_back(-s.d[r]);
        M.append_row(row);
      }
      auto k = kernel_basis(M);
      if (k.size() != 1 || k[0][n] == 0) return;
      RatVector x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = k[0][i] / k[0][n];
      if (!is_feasible(s, x) || !seen.insert(point_key(x)).second) return;
      out.push_back(x);
      return;
    }
    for (std::size_t r = from; r < m; ++r) {
      pick.push_back(r);
      rec(r + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return out;
}

// Pairs of vertices whose common tight rows leave a one-dimensional face.
std::vector<IntVector> edge_directions(const ConstraintSystem& s, const std::vector<RatVector>& vs) {
  std::vector<IntVector> dirs;
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j) {
      auto ti = tight_rows(s, vs[i]), tj = tight_rows(s, vs[j]);
      std::vector<std::size_t> common;
      std::set_intersection(ti.begin(), ti.end(), tj.begin(), tj.end(), std::back_inserter(common));
      EchelonBasis e(s.n());
      for (std::size_t r = 0; r < s.m_A(); ++r) e.insert(s.A.row(r));
      for (auto r : common) e.insert(s.B.row(r));
      if (e.rank() + 1 != s.n()) continue;
      RatVector d(s.n());
      for (std::size_t k = 0; k < s.n(); ++k) d[k] = vs[j][k] - vs[i][k];
      dirs.push_back(canonical_sign(normalize_coprime(d)));
    }
  return dirs;
}

}  // namespace

TEST(Enumerate, IdentityGivesUnitVectors) {
  auto cs = enumerate_circuits(from_rows(2, {{1, 0}, {0, 1}}));
  EXPECT_EQ(circuit_set(cs), (std::set<IntVector>{iv({1, 0}), iv({0, 1})}));
}

TEST(Enumerate, IdentityWithSumRow) {
  auto cs = enumerate_circuits(from_rows(2, {{1, 0}, {0, 1}, {1, 1}}));
  EXPECT_EQ(circuit_set(cs), (std::set<IntVector>{iv({1, 0}), iv({0, 1}), iv({1, -1})}));
}

TEST(Enumerate, SumZeroPlane) {
  auto cs = enumerate_circuits(from_rows(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {{1, 1, 1}}));
  EXPECT_EQ(circuit_set(cs), (std::set<IntVector>{iv({1, -1, 0}), iv({1, 0, -1}), iv({0, 1, -1})}));
}

TEST(Enumerate, MethodsAgreeOnExamples) {
  for (const auto& s : {from_rows(2, {{1, 0}, {0, 1}, {1, 1}}), from_rows(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {{1, 1, 1}})}) {
    EnumerationOptions o;
    o.method = EnumerationMethod::SupportBruteForce;
    EXPECT_EQ(circuit_set(enumerate_circuits(s)), circuit_set(enumerate_circuits(s, o)));
  }
}

TEST(Enumerate, CapExceeded) {
  ConstraintSystem s(13);
  for (std::size_t i = 0; i < 13; ++i) {
    RatVector r(13, 0);
    r[i] = 1;
    s.add_inequality(r, 1);
  }
  try {
    enumerate_circuits(s);
    FAIL() << "expected CapExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CapExceeded);
  }
  EnumerationOptions o;
  o.max_vars = 13;
  EXPECT_EQ(enumerate_circuits(s, o).size(), 13u);
}

TEST(Enumerate, WithinSupportStaysInside) {
  auto inst = gadgets::gadget(gadgets::GadgetKind::Thm22, 2);
  auto cs = circuits_within(inst.system, inst.seed_vector);
  ASSERT_FALSE(cs.empty());
  auto outer = b_support(inst.system, inst.seed_vector);
  for (const auto& c : cs) {
    auto inner = b_support(inst.system, to_rational(c.vector));
    EXPECT_TRUE(std::includes(outer.begin(), outer.end(), inner.begin(), inner.end()));
  }
}

TEST(EnumerateProperty, RowSubsetsMatchSupportBruteForce) {
  std::mt19937_64 rng(424242);
  for (int t = 0; t < 40; ++t) {
    auto s = test_support::random_system(rng);
    EnumerationOptions o;
    o.method = EnumerationMethod::SupportBruteForce;
    auto a = enumerate_circuits(s), b = enumerate_circuits(s, o);
    EXPECT_EQ(circuit_set(a), circuit_set(b)) << "system " << t;
    for (const auto& c : a) EXPECT_TRUE(is_circuit(s, c.vector).is_circuit());
  }
}

TEST(EnumerateProperty, NonCircuitWitnessesReduceSupport) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> entry(-2, 2);
  std::size_t witnesses = 0;
  for (int t = 0; t < 40; ++t) {
    auto s = test_support::random_system(rng);
    auto kerA = kernel_basis(s.A);
    for (int trial = 0; trial < 10; ++trial) {
      RatVector g(s.n(), 0);
      for (const auto& k : kerA) {
        const int c = entry(rng);
        for (std::size_t i = 0; i < s.n(); ++i) g[i] += c * k[i];
      }
      if (is_zero(g)) continue;
      auto d = is_circuit(s, g);
      if (d.verdict != CircuitDecision::Verdict::NotCircuit) continue;
      EXPECT_TRUE(test_support::witness_reduces(s, g, d.witness));
      ++witnesses;
    }
  }
  EXPECT_GT(witnesses, 50u);
}

// Every edge direction of a small polytope is a circuit.
TEST(EnumerateProperty, EdgeDirectionsAreCircuits) {
  std::mt19937_64 rng(31337);
  std::size_t edges = 0;
  for (int t = 0; t < 60; ++t) {
    auto s = test_support::random_system(rng);
    if (s.n() > 4) continue;
    for (std::size_t i = 0; i < s.n(); ++i) {  // keep it bounded
      RatVector up(s.n(), 0), down(s.n(), 0);
      up[i] = 1;
      down[i] = -1;
      s.add_inequality(up, 2);
      s.add_inequality(down, 2);
    }
    auto cs = circuit_set(enumerate_circuits(s));
    for (const auto& d : edge_directions(s, vertices(s))) {
      EXPECT_TRUE(cs.count(d)) << "system " << t;
      ++edges;
    }
  }
  EXPECT_GT(edges, 100u);
}
