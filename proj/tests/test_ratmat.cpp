#include <gtest/gtest.h>

#include <random>

#include "circuitkit/ratmat.hpp"

using namespace circuitkit;

namespace {

RatMatrix mat(std::initializer_list<std::initializer_list<long>> rows) {
  std::vector<RatVector> rs;
  std::size_t cols = 0;
  for (auto r : rows) {
    RatVector v;
    for (long x : r) v.emplace_back(x);
    cols = v.size();
    rs.push_back(v);
  }
  return RatMatrix::from_rows(rs, cols);
}

IntVector iv(std::initializer_list<long> xs) {
  IntVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

// b spans the same line as want
bool parallel(const RatVector& b, const RatVector& want) {
  RatMatrix m = RatMatrix::from_rows({b, want}, b.size());
  return rank(m) == 1;
}

RatMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  std::uniform_int_distribution<int> num(-3, 3), den(1, 3), zero(0, 2);
  RatMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      Rational q(zero(rng) == 0 ? 0 : num(rng), den(rng));
      q.canonicalize();
      m.row(i)[j] = q;
    }
  return m;
}

}  // namespace

TEST(Rank, IdentityZeroAndProportional) {
  EXPECT_EQ(rank(RatMatrix::identity(2)), 2u);
  EXPECT_EQ(rank(RatMatrix(3, 4)), 0u);
  EXPECT_EQ(rank(mat({{1, 1}, {2, 2}})), 1u);
}

TEST(Kernel, SingleConstraint) {
  auto k = kernel_basis(mat({{1, 1}}));
  ASSERT_EQ(k.size(), 1u);
  EXPECT_TRUE(parallel(k[0], RatVector{1, -1}));
}

TEST(Kernel, TrivialKernel) { EXPECT_TRUE(kernel_basis(RatMatrix::identity(2)).empty()); }

TEST(Kernel, ForcedByElimination) {
  auto k = kernel_basis(mat({{1, 1, 0}, {0, 1, 1}}));
  ASSERT_EQ(k.size(), 1u);
  EXPECT_TRUE(parallel(k[0], RatVector{1, -1, 1}));
}

TEST(Kernel, ZeroRowMatrixGivesFullBasis) {
  auto k = kernel_basis(RatMatrix(0, 3));
  EXPECT_EQ(k.size(), 3u);
}

TEST(Normalize, ClearsDenominators) {
  EXPECT_EQ(normalize_coprime(RatVector{Rational(1, 2), Rational(-1, 2), Rational(1, 4)}), iv({2, -2, 1}));
}

TEST(Normalize, DividesByGcd) { EXPECT_EQ(normalize_coprime(RatVector{3, 6, 9}), iv({1, 2, 3})); }

TEST(Normalize, CanonicalSign) {
  auto v = normalize_coprime(RatVector{0, Rational(-5, 3)});
  EXPECT_EQ(v, iv({0, -1}));
  EXPECT_EQ(canonical_sign(v), iv({0, 1}));
}

TEST(Normalize, ZeroVectorRejected) { EXPECT_THROW(normalize_coprime(RatVector{0, 0}), Error); }

TEST(ParseRational, Forms) {
  EXPECT_EQ(parse_rational("3/6"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-4"), Rational(-4));
  EXPECT_EQ(parse_rational("7/1"), Rational(7));
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("x"), Error);
}

TEST(RatMatrixProperty, KernelVectorsAnnihilateAndDimensionsAdd) {
  std::mt19937_64 rng(20240611);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t r = 1 + rng() % 5, c = 1 + rng() % 6;
    RatMatrix m = random_matrix(rng, r, c);
    auto k = kernel_basis(m);
    for (const auto& b : k) EXPECT_TRUE(is_zero(multiply(m, b)));
    EXPECT_EQ(rank(m) + k.size(), c);
  }
}

TEST(RatMatrixProperty, NormalizeIdempotentAndScaleInvariant) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
  for (int trial = 0; trial < 300; ++trial) {
    RatVector v(1 + rng() % 5);
    for (auto& x : v) {
      x = Rational(num(rng), den(rng));
      x.canonicalize();
    }
    if (is_zero(v)) continue;
    const IntVector n = normalize_coprime(v);
    EXPECT_EQ(normalize_coprime(n), n);
    Rational lambda(1 + static_cast<long>(rng() % 11), 1 + static_cast<long>(rng() % 5));
    lambda.canonicalize();
    RatVector scaled = v;
    for (auto& x : scaled) x *= lambda;
    EXPECT_EQ(normalize_coprime(scaled), n);
    EXPECT_EQ(gcd_of(n), 1);
  }
}
