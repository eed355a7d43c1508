#pragma once
// Exact rational linear algebra on top of GMP.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "circuitkit/error.hpp"

namespace circuitkit {

using Rational = mpq_class;
using Integer = mpz_class;
using RatVector = std::vector<Rational>;
using IntVector = std::vector<Integer>;

// "p/q", or "p" when q = 1.
inline std::string to_string(const Rational& q) { return q.get_str(); }
inline std::string to_string(const Integer& z) { return z.get_str(); }

inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto ws = [](char c) { return c == ' ' || c == '\t'; };
  while (!s.empty() && ws(s.back())) s.pop_back();
  while (!s.empty() && ws(s.front())) s.erase(s.begin());
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(Integer(s, 10));
    Integer num(s.substr(0, slash), 10), den(s.substr(slash + 1), 10);
    if (den == 0) throw Error(ErrorKind::BadParameter, "zero denominator in '" + s + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw Error(ErrorKind::BadParameter, "not a rational: '" + s + "'");
  }
}

inline RatVector to_rational(const IntVector& v) {
  RatVector out;
  out.reserve(v.size());
  for (const auto& z : v) out.emplace_back(z);
  return out;
}

inline bool is_zero(std::span<const Rational> v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return q == 0; });
}

inline bool is_integral(std::span<const Rational> v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return q.get_den() == 1; });
}

template <class T>
std::vector<std::size_t> support(const std::vector<T>& v) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) s.push_back(i);
  return s;
}

class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static RatMatrix from_rows(const std::vector<RatVector>& rows, std::size_t cols) {
    RatMatrix m(0, cols);
    for (const auto& r : rows) m.append_row(r);
    return m;
  }
  static RatMatrix identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const Rational> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<Rational> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  RatVector row_vector(std::size_t r) const { return RatVector(row(r).begin(), row(r).end()); }

  void append_row(std::span<const Rational> r) {
    if (r.size() != cols_) throw Error(ErrorKind::DimensionMismatch, "row length differs from column count");
    data_.insert(data_.end(), r.begin(), r.end());
    ++rows_;
  }

  bool operator==(const RatMatrix&) const = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> data_;
};

inline RatVector multiply(const RatMatrix& m, std::span<const Rational> x) {
  if (x.size() != m.cols()) throw Error(ErrorKind::DimensionMismatch, "matrix-vector size mismatch");
  RatVector out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Rational s = 0;
    auto row = m.row(r);
    for (std::size_t c = 0; c < row.size(); ++c)
      if (row[c] != 0 && x[c] != 0) s += row[c] * x[c];
    out[r] = s;
  }
  return out;
}

inline Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  return s;
}

// Incremental reduced row echelon form. Rows are inserted one at a time and
// kept fully reduced, so the kernel can be read off at any moment.
class EchelonBasis {
 public:
  explicit EchelonBasis(std::size_t cols) : cols_(cols) {}

  std::size_t cols() const { return cols_; }
  std::size_t rank() const { return rows_.size(); }

  // Returns true when the row was independent of the rows seen so far.
  bool insert(std::span<const Rational> row) {
    if (rows_.size() == cols_) return false;
    RatVector r(row.begin(), row.end());
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const Rational f = r[pivots_[k]];
      if (f == 0) continue;
      for (std::size_t c = 0; c < cols_; ++c)
        if (rows_[k][c] != 0) r[c] -= f * rows_[k][c];
    }
    std::size_t p = 0;
    while (p < cols_ && r[p] == 0) ++p;
    if (p == cols_) return false;
    const Rational inv = 1 / r[p];
    for (auto& q : r) q *= inv;
    for (auto& other : rows_) {
      const Rational f = other[p];
      if (f == 0) continue;
      for (std::size_t c = 0; c < cols_; ++c)
        if (r[c] != 0) other[c] -= f * r[c];
    }
    rows_.push_back(std::move(r));
    pivots_.push_back(p);
    return true;
  }

  std::vector<RatVector> kernel() const {
    std::vector<bool> is_pivot(cols_, false);
    for (auto p : pivots_) is_pivot[p] = true;
    std::vector<RatVector> basis;
    for (std::size_t f = 0; f < cols_; ++f) {
      if (is_pivot[f]) continue;
      RatVector v(cols_);
      v[f] = 1;
      for (std::size_t k = 0; k < rows_.size(); ++k) v[pivots_[k]] = -rows_[k][f];
      basis.push_back(std::move(v));
    }
    return basis;
  }

 private:
  std::size_t cols_;
  std::vector<RatVector> rows_;
  std::vector<std::size_t> pivots_;
};

inline std::size_t rank(const RatMatrix& m) {
  EchelonBasis e(m.cols());
  for (std::size_t r = 0; r < m.rows() && e.rank() < m.cols(); ++r) e.insert(m.row(r));
  return e.rank();
}

inline std::vector<RatVector> kernel_basis(const RatMatrix& m) {
  EchelonBasis e(m.cols());
  for (std::size_t r = 0; r < m.rows() && e.rank() < m.cols(); ++r) e.insert(m.row(r));
  return e.kernel();
}

inline Integer gcd_of(const IntVector& v) {
  Integer g = 0;
  for (const auto& z : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
  return g;
}

// Positive multiple with coprime integer entries. Sign is left alone.
inline IntVector normalize_coprime(std::span<const Rational> v) {
  if (is_zero(v)) throw Error(ErrorKind::ZeroVector, "cannot normalize the zero vector");
  Integer l = 1;
  for (const auto& q : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  IntVector out;
  out.reserve(v.size());
  for (const auto& q : v) out.push_back(Integer(q.get_num() * (l / q.get_den())));
  Integer g = gcd_of(out);
  for (auto& z : out) z /= g;
  return out;
}

inline IntVector normalize_coprime(const IntVector& v) { return normalize_coprime(to_rational(v)); }

// First nonzero entry made positive.
inline IntVector canonical_sign(IntVector v) {
  for (const auto& z : v) {
    if (z == 0) continue;
    if (z < 0)
      for (auto& w : v) w = -w;
    break;
  }
  return v;
}

inline IntVector negate(IntVector v) {
  for (auto& z : v) z = -z;
  return v;
}

}  // namespace circuitkit
