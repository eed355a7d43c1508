#pragma once
// Full circuit enumeration, two independent ways.
//
// RowSubsets walks the lattice of flats: a flat is a row set Z closed under
// "every row vanishing on ker([A; B_Z])". Starting from the closure of the
// empty set (or of a given zero set), adding one row outside the flat cuts the
// kernel by one dimension; the rows that vanish on the smaller kernel form the
// child flat. Flats whose kernel is a line are exactly the circuits.
//
// SupportBruteForce enumerates candidate B-supports T in increasing size and
// keeps T when ker([A; B_{rows outside T}]) is nonzero and no smaller support
// already found sits inside T.

#include <cstdint>
#include <functional>
#include <numeric>
#include <set>
#include <type_traits>
#include <unordered_map>
#include <unordered_set>

#include "circuitkit/circuits.hpp"

namespace circuitkit {

enum class EnumerationMethod { RowSubsets, SupportBruteForce };

struct EnumerationOptions {
  std::size_t max_vars = 12;
  std::size_t max_rows_bruteforce = 22;
  EnumerationMethod method = EnumerationMethod::RowSubsets;
  bool verify = true;  // confirm each output with is_circuit
  // When set, only circuits h with (B h)_i = 0 on these rows are produced.
  std::optional<std::vector<std::size_t>> forced_zero_rows;
};

namespace detail {

inline IntVector integer_row(std::span<const Rational> r) {
  if (is_zero(r)) return IntVector(r.size(), 0);
  return normalize_coprime(r);
}

struct RowSetHash {
  std::size_t operator()(const std::vector<std::uint64_t>& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto w : v) h = (h ^ w) * 1099511628211ull;
    return h;
  }
};

struct Overflow {};

inline long long gcd_abs(long long a, long long b) { return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b); }
inline Integer gcd_abs(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}
inline Integer to_integer(long long v) { return Integer(static_cast<signed long>(v)); }
inline Integer to_integer(const Integer& v) { return v; }

template <class Int>
void normalize_in_place(std::vector<Int>& v, bool fix_sign) {
  Int g = 0;
  for (const auto& x : v) g = gcd_abs(g, x);
  if (g > 1)
    for (auto& x : v) x /= g;
  if (!fix_sign) return;
  for (const auto& x : v) {
    if (x == 0) continue;
    if (x < 0)
      for (auto& y : v) y = -y;
    break;
  }
}

template <class Int>
struct VecHash {
  std::size_t operator()(const std::vector<Int>& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (const auto& x : v) {
      std::size_t w;
      if constexpr (std::is_same_v<Int, long long>) w = static_cast<std::size_t>(x);
      else w = static_cast<std::size_t>(mpz_get_si(x.get_mpz_t()));
      h = (h ^ w) * 1099511628211ull;
    }
    return h;
  }
};

template <class Int>
class FlatWalker {
 public:
  using Vec = std::vector<Int>;

  FlatWalker(const ConstraintSystem& sys, const std::vector<IntVector>& int_rows) : sys_(sys) {
    words_ = (sys.m_B() + 63) / 64;
    for (const auto& r : int_rows) rows_.push_back(convert(r));
  }

  std::set<IntVector> run(const std::vector<std::size_t>& seed_rows) {
    EchelonBasis e(sys_.n());
    for (std::size_t r = 0; r < sys_.m_A(); ++r) e.insert(sys_.A.row(r));
    for (auto r : seed_rows) e.insert(sys_.B.row(r));
    std::vector<Vec> basis;
    for (auto& v : e.kernel()) basis.push_back(convert(normalize_coprime(v)));
    if (!basis.empty()) {
      std::vector<std::uint64_t> z(words_, 0);
      std::vector<std::size_t> active;
      for (std::size_t r = 0; r < rows_.size(); ++r) {
        bool zero = true;
        for (const auto& v : basis) zero = zero && dot(r, v) == 0;
        if (zero) z[r / 64] |= std::uint64_t(1) << (r % 64);
        else active.push_back(r);
      }
      visit(basis, z, active);
    }
    std::set<IntVector> out;
    for (const auto& v : found_) {
      IntVector w;
      for (const auto& x : v) w.push_back(to_integer(x));
      out.insert(std::move(w));
    }
    return out;
  }

 private:
  static Vec convert(const IntVector& v) {
    Vec out;
    for (const auto& z : v) {
      if constexpr (std::is_same_v<Int, long long>) {
        if (!z.fits_slong_p() || abs(z) >= (Integer(1) << 60)) throw Overflow{};
        out.push_back(z.get_si());
      } else {
        out.push_back(z);
      }
    }
    return out;
  }
  Int dot(std::size_t r, const Vec& v) const { return dot(rows_[r], v); }

  // Machine path: every stored entry stays below 2^60 in magnitude, so a sum
  // of up to 128 products fits in 128 bits and only the result is checked.
  static Int dot(const Vec& a, const Vec& b) {
    if constexpr (std::is_same_v<Int, long long>) {
      __int128 s = 0;
      for (std::size_t c = 0; c < a.size(); ++c) s += static_cast<__int128>(a[c]) * b[c];
      return narrow(s);
    } else {
      Int s = 0;
      for (std::size_t c = 0; c < a.size(); ++c)
        if (a[c] != 0 && b[c] != 0) s += a[c] * b[c];
      return s;
    }
  }
  static long long narrow(__int128 s) {
    constexpr __int128 lim = __int128(1) << 60;
    if (s >= lim || s <= -lim) throw Overflow{};
    return static_cast<long long>(s);
  }

  void visit(const std::vector<Vec>& basis, const std::vector<std::uint64_t>& z, const std::vector<std::size_t>& active) {
    const std::size_t d = basis.size();
    if (d == 1) {
      Vec v = basis[0];
      normalize_in_place(v, true);
      found_.insert(std::move(v));
      return;
    }
    // Coefficients of each active row on the kernel basis; rows with parallel
    // coefficients cut out the same child flat.
    std::vector<Vec> keys;
    std::vector<std::vector<std::size_t>> groups;
    std::unordered_map<Vec, std::size_t, VecHash<Int>> index;
    for (auto r : active) {
      Vec c(d);
      for (std::size_t q = 0; q < d; ++q) c[q] = dot(r, basis[q]);
      normalize_in_place(c, true);
      auto [it, fresh] = index.try_emplace(c, keys.size());
      if (fresh) {
        keys.push_back(std::move(c));
        groups.emplace_back();
      }
      groups[it->second].push_back(r);
    }
    for (std::size_t gi = 0; gi < keys.size(); ++gi) {
      const auto& c = keys[gi];
      const auto& members = groups[gi];
      std::size_t p = 0;
      while (c[p] == 0) ++p;
      auto combine = [&](std::size_t q) {
        Vec v(basis[q].size());
        for (std::size_t k = 0; k < v.size(); ++k) {
          if constexpr (std::is_same_v<Int, long long>)
            v[k] = narrow(static_cast<__int128>(c[p]) * basis[q][k] - static_cast<__int128>(c[q]) * basis[p][k]);
          else
            v[k] = c[p] * basis[q][k] - c[q] * basis[p][k];
        }
        return v;
      };
      if (d == 2) {
        Vec v = combine(1 - p);
        normalize_in_place(v, true);
        found_.insert(std::move(v));
        continue;
      }
      std::vector<std::uint64_t> cz = z;
      for (auto r : members) cz[r / 64] |= std::uint64_t(1) << (r % 64);
      if (!seen_.insert(cz).second) continue;
      std::vector<Vec> child;
      for (std::size_t q = 0; q < d; ++q) {
        if (q == p) continue;
        Vec v = combine(q);
        normalize_in_place(v, false);
        child.push_back(std::move(v));
      }
      std::vector<std::size_t> rest;
      for (auto r : active)
        if (!((cz[r / 64] >> (r % 64)) & 1)) rest.push_back(r);
      visit(child, cz, rest);
    }
  }

  const ConstraintSystem& sys_;
  std::size_t words_;
  std::vector<Vec> rows_;
  std::unordered_set<std::vector<std::uint64_t>, RowSetHash> seen_;
  std::unordered_set<Vec, VecHash<Int>> found_;
};

inline std::set<IntVector> by_row_subsets(const ConstraintSystem& sys, const std::vector<std::size_t>& seed) {
  std::vector<IntVector> rows;
  for (std::size_t r = 0; r < sys.m_B(); ++r) rows.push_back(integer_row(sys.B.row(r)));
  try {
    if (sys.n() <= 128) return FlatWalker<long long>(sys, rows).run(seed);
    return FlatWalker<Integer>(sys, rows).run(seed);
  } catch (const Overflow&) {
    return FlatWalker<Integer>(sys, rows).run(seed);
  }
}

inline std::set<IntVector> by_supports(const ConstraintSystem& sys, const std::vector<std::size_t>& forced_zero,
                                       std::size_t max_rows) {
  std::vector<bool> forced(sys.m_B(), false);
  for (auto r : forced_zero) forced[r] = true;
  std::vector<std::size_t> free_rows;
  for (std::size_t r = 0; r < sys.m_B(); ++r)
    if (!forced[r]) free_rows.push_back(r);
  const std::size_t m = free_rows.size();
  if (m > max_rows) throw Error(ErrorKind::CapExceeded, "support enumeration over " + std::to_string(m) + " rows");

  std::vector<std::uint32_t> masks;
  for (std::uint32_t t = 0; t < (std::uint32_t(1) << m); ++t) masks.push_back(t);
  std::stable_sort(masks.begin(), masks.end(),
                   [](std::uint32_t a, std::uint32_t b) { return __builtin_popcount(a) < __builtin_popcount(b); });

  std::vector<std::uint32_t> found;
  std::set<IntVector> out;
  for (auto t : masks) {
    bool dominated = false;
    for (auto f : found)
      if ((f & t) == f) {
        dominated = true;
        break;
      }
    if (dominated) continue;
    EchelonBasis e(sys.n());
    for (std::size_t r = 0; r < sys.m_A(); ++r) e.insert(sys.A.row(r));
    for (std::size_t r = 0; r < sys.m_B(); ++r)
      if (forced[r]) e.insert(sys.B.row(r));
    for (std::size_t i = 0; i < m; ++i)
      if (!((t >> i) & 1)) e.insert(sys.B.row(free_rows[i]));
    auto k = e.kernel();
    if (k.empty()) continue;
    if (k.size() > 1)
      throw Error(ErrorKind::BadInstance, "support-minimal kernel of dimension > 1 (lineality of dimension >= 2)");
    found.push_back(t);
    out.insert(canonical_sign(normalize_coprime(k[0])));
  }
  return out;
}

}  // namespace detail

inline std::vector<Circuit> enumerate_circuits(const ConstraintSystem& sys, const EnumerationOptions& opt = {}) {
  sys.validate();
  // With forced zero rows the search lives in ker([A; B_forced]); the cap
  // applies to that dimension.
  std::size_t dim = sys.n();
  if (opt.forced_zero_rows) {
    EchelonBasis e(sys.n());
    for (std::size_t r = 0; r < sys.m_A(); ++r) e.insert(sys.A.row(r));
    for (auto r : *opt.forced_zero_rows) e.insert(sys.B.row(r));
    dim = sys.n() - e.rank();
  }
  if (dim > opt.max_vars)
    throw Error(ErrorKind::CapExceeded,
                std::to_string(dim) + " free dimensions exceed the cap of " + std::to_string(opt.max_vars));
  std::vector<std::size_t> seed = opt.forced_zero_rows.value_or(std::vector<std::size_t>{});
  std::set<IntVector> raw = opt.method == EnumerationMethod::RowSubsets
                                ? detail::by_row_subsets(sys, seed)
                                : detail::by_supports(sys, seed, opt.max_rows_bruteforce);
  std::vector<Circuit> out;
  for (const auto& v : raw) {
    RatVector g = to_rational(v);
    if (opt.verify && !is_circuit(sys, g).is_circuit()) continue;
    out.push_back(Circuit{v, zero_rows(sys, g)});
  }
  return out;
}

// Circuits h of the system with supp(B h) inside supp(B g).
inline std::vector<Circuit> circuits_within(const ConstraintSystem& sys, std::span<const Rational> g,
                                            EnumerationOptions opt = {}) {
  opt.forced_zero_rows = zero_rows(sys, g);
  return enumerate_circuits(sys, opt);
}

}  // namespace circuitkit
