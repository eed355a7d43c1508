#pragma once
// Shared helpers for the test binaries.

#include <random>

#include "circuitkit/circuits.hpp"
#include "circuitkit/enumerate.hpp"

namespace circuitkit::test_support {

// Pointed random system: n <= 6 variables, m_B <= 12 inequalities, an
// occasional equality, small integer entries.
inline ConstraintSystem random_system(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> entry(-2, 2), nvar(2, 6), eqs(0, 1);
  while (true) {
    const int n = nvar(rng);
    std::uniform_int_distribution<int> rows(n, 12);
    ConstraintSystem s(static_cast<std::size_t>(n));
    const int me = n >= 3 ? eqs(rng) : 0;
    const int mb = rows(rng);
    auto draw = [&] {
      RatVector r(static_cast<std::size_t>(n));
      for (auto& x : r) x = entry(rng);
      return r;
    };
    for (int i = 0; i < me; ++i) s.add_equality(draw(), 0);
    for (int i = 0; i < mb; ++i) s.add_inequality(draw(), 1);
    EchelonBasis e(s.n());
    for (std::size_t r = 0; r < s.m_A(); ++r) e.insert(s.A.row(r));
    for (std::size_t r = 0; r < s.m_B(); ++r) e.insert(s.B.row(r));
    if (e.rank() == s.n()) return s;
  }
}

inline std::set<IntVector> circuit_set(const std::vector<Circuit>& cs) {
  std::set<IntVector> out;
  for (const auto& c : cs) out.insert(canonical_sign(c.vector));
  return out;
}

// supp(B y) strictly inside supp(B g) and A y = 0.
inline bool witness_reduces(const ConstraintSystem& sys, const RatVector& g, const RatVector& y) {
  if (is_zero(y) || !is_zero(multiply(sys.A, y))) return false;
  auto by = b_support(sys, y), bg = b_support(sys, g);
  return std::includes(bg.begin(), bg.end(), by.begin(), by.end()) && by.size() < bg.size();
}

}  // namespace circuitkit::test_support
