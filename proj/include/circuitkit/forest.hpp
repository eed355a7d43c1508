#pragma once
// Forest polytope of a graph. (Rank): sum_{e in E(G[U])} x(e) <= |U| - 1 for
// every nonempty U. (MWF) adds x >= 0. Circuits are decided on (Rank); walks
// run on (MWF).
//
// For (Rank) every edge e = uv has the row U = {u,v}, which reads x(e). So a
// vector y with supp(By) inside supp(Bg) vanishes off supp(g), and circuit
// questions about g only involve the columns of supp(g).

#include <deque>
#include <functional>
#include <map>
#include <random>
#include <set>

#include "circuitkit/circuits.hpp"
#include "circuitkit/enumerate.hpp"
#include "circuitkit/graph.hpp"

namespace circuitkit::forest {

using SignedEdgeVector = IntVector;  // indexed by edge id

struct RankOptions {
  int max_vertices = 14;
  bool omit_empty = false;  // drop rows of sets that induce no edge (all-zero rows)
};

inline std::string set_label(const Graph& g, std::uint64_t mask) {
  std::string s = "U{";
  bool first = true;
  for (int v = 0; v < g.vertex_count(); ++v)
    if ((mask >> v) & 1) {
      s += (first ? "" : ",") + g.vertex_name(v);
      first = false;
    }
  return s + "}";
}

// Rows are ordered by the bitmask of U, so with omit_empty off row U is mask-1.
inline ConstraintSystem rank_system(const Graph& g, const RankOptions& opt = {}) {
  const int n = g.vertex_count();
  if (n > opt.max_vertices)
    throw Error(ErrorKind::CapExceeded, std::to_string(n) + " vertices exceed the cap of " + std::to_string(opt.max_vertices));
  const std::size_t m = static_cast<std::size_t>(g.edge_count());
  ConstraintSystem sys(m);
  for (int e = 0; e < g.edge_count(); ++e) sys.variable_labels[static_cast<std::size_t>(e)] = g.edge_name(e);
  for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << n); ++mask) {
    auto es = g.induced_edges(mask);
    if (es.empty() && opt.omit_empty) continue;
    RatVector row(m);
    for (int e : es) row[static_cast<std::size_t>(e)] = 1;
    sys.add_inequality(row, __builtin_popcountll(mask) - 1, set_label(g, mask));
  }
  return sys;
}

inline std::size_t rank_row(std::uint64_t mask) { return static_cast<std::size_t>(mask - 1); }

inline ConstraintSystem mwf_system(const Graph& g, const RankOptions& opt = {}) {
  ConstraintSystem sys = rank_system(g, opt);
  for (int e = 0; e < g.edge_count(); ++e) {
    RatVector row(sys.n());
    row[static_cast<std::size_t>(e)] = -1;
    sys.add_inequality(row, 0, "x(" + g.edge_name(e) + ")>=0");
  }
  return sys;
}

inline SignedEdgeVector signed_vector(const Graph& g, const std::map<int, int>& values) {
  SignedEdgeVector v(static_cast<std::size_t>(g.edge_count()), 0);
  for (auto [e, x] : values) {
    if (e < 0 || e >= g.edge_count()) throw Error(ErrorKind::BadParameter, "edge id out of range");
    v[static_cast<std::size_t>(e)] = x;
  }
  return v;
}

inline std::vector<int> support_edges(const SignedEdgeVector& g) {
  std::vector<int> s;
  for (std::size_t e = 0; e < g.size(); ++e)
    if (g[e] != 0) s.push_back(static_cast<int>(e));
  return s;
}

inline bool mixed_sign(const SignedEdgeVector& g) {
  bool pos = false, neg = false;
  for (const auto& x : g) {
    pos = pos || x > 0;
    neg = neg || x < 0;
  }
  return pos && neg;
}

inline bool is_01(const SignedEdgeVector& g) {
  return std::all_of(g.begin(), g.end(), [](const Integer& z) { return z == 0 || z == 1 || z == -1; });
}

inline RatVector forest_vector(const Graph& g, const std::vector<int>& F) {
  RatVector x(static_cast<std::size_t>(g.edge_count()));
  for (int e : F) x[static_cast<std::size_t>(e)] = 1;
  return x;
}

// ------------------------------------------------------------ balanced sets

namespace detail {

// Induced sums and induced support patterns for every vertex subset.
struct SubsetTable {
  std::vector<long long> sum;           // sum of g over E(G[U])
  std::vector<std::uint64_t> pattern;   // bits = positions in `support` inside G[U]
  std::vector<int> support;

  SubsetTable(const Graph& g, const std::vector<long long>& vals, int max_vertices) {
    const int n = g.vertex_count();
    if (n > max_vertices) throw Error(ErrorKind::CapExceeded, "too many vertices for subset enumeration");
    for (int e = 0; e < g.edge_count(); ++e)
      if (vals[static_cast<std::size_t>(e)] != 0) support.push_back(e);
    if (support.size() > 64) throw Error(ErrorKind::CapExceeded, "support larger than 64 edges");
    std::vector<int> pos(static_cast<std::size_t>(g.edge_count()), -1);
    for (std::size_t i = 0; i < support.size(); ++i) pos[static_cast<std::size_t>(support[i])] = static_cast<int>(i);
    const std::size_t N = std::size_t(1) << n;
    sum.assign(N, 0);
    pattern.assign(N, 0);
    for (std::size_t U = 1; U < N; ++U) {
      const int low = __builtin_ctzll(U);
      const std::size_t rest = U & (U - 1);
      long long s = sum[rest];
      std::uint64_t p = pattern[rest];
      for (int e : g.incident(low)) {
        const int w = g.edge(e).other(low);
        if (!((rest >> w) & 1)) continue;
        const int i = pos[static_cast<std::size_t>(e)];
        if (i < 0) continue;
        s += vals[static_cast<std::size_t>(e)];
        p |= std::uint64_t(1) << i;
      }
      sum[U] = s;
      pattern[U] = p;
    }
  }

  std::size_t size() const { return sum.size(); }
  bool balanced(std::size_t U) const { return sum[U] == 0; }
};

inline std::vector<long long> small_values(const SignedEdgeVector& g) {
  std::vector<long long> v;
  for (const auto& z : g) {
    if (!z.fits_slong_p() || abs(z) > (Integer(1) << 40)) throw Error(ErrorKind::BadParameter, "edge value too large");
    v.push_back(z.get_si());
  }
  return v;
}

// Integer row echelon on at most 64 columns; rows are kept primitive.
class SmallEchelon {
 public:
  explicit SmallEchelon(std::size_t cols) : cols_(cols) {}
  std::size_t rank() const { return rows_.size(); }

  bool insert(std::vector<long long> r) {
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const auto& p = rows_[k];
      const std::size_t c = piv_[k];
      if (r[c] == 0) continue;
      const long long a = p[c], b = r[c];
      for (std::size_t j = 0; j < cols_; ++j) r[j] = checked(static_cast<__int128>(a) * r[j] - static_cast<__int128>(b) * p[j]);
      primitive(r);
    }
    std::size_t c = 0;
    while (c < cols_ && r[c] == 0) ++c;
    if (c == cols_) return false;
    rows_.push_back(std::move(r));
    piv_.push_back(c);
    return true;
  }

 private:
  static long long checked(__int128 v) {
    constexpr __int128 lim = __int128(1) << 62;
    if (v >= lim || v <= -lim) throw circuitkit::detail::Overflow{};
    return static_cast<long long>(v);
  }
  static void primitive(std::vector<long long>& r) {
    long long g = 0;
    for (auto x : r) g = std::gcd(g, x < 0 ? -x : x);
    if (g > 1)
      for (auto& x : r) x /= g;
  }
  std::size_t cols_;
  std::vector<std::vector<long long>> rows_;
  std::vector<std::size_t> piv_;
};

inline bool circuit_from_table(const SubsetTable& t) {
  const std::size_t k = t.support.size();
  if (k == 0) throw Error(ErrorKind::ZeroVector, "the zero vector is never a circuit");
  if (k == 1) return true;
  std::set<std::uint64_t> rows;
  for (std::size_t U = 1; U < t.size(); ++U)
    if (t.balanced(U) && t.pattern[U]) rows.insert(t.pattern[U]);
  try {
    SmallEchelon e(k);
    for (auto p : rows) {
      std::vector<long long> r(k, 0);
      for (std::size_t i = 0; i < k; ++i) r[i] = (p >> i) & 1;
      e.insert(std::move(r));
      if (e.rank() + 1 == k) return true;
    }
    return e.rank() + 1 == k;
  } catch (const circuitkit::detail::Overflow&) {
    EchelonBasis e(k);
    for (auto p : rows) {
      RatVector r(k);
      for (std::size_t i = 0; i < k; ++i) r[i] = static_cast<long>((p >> i) & 1);
      e.insert(r);
    }
    return e.rank() + 1 == k;
  }
}

}  // namespace detail

// Circuit test on (Rank) for an integer edge vector, in machine integers.
// Equivalent to is_circuit(rank_system(g), x) but avoids materializing B.
inline bool rank_circuit_fast(const Graph& g, const SignedEdgeVector& x, int max_vertices = 14) {
  return detail::circuit_from_table(detail::SubsetTable(g, detail::small_values(x), max_vertices));
}

struct BalancedSetReport {
  SignedEdgeVector subject;
  std::vector<std::uint64_t> balanced;                 // vertex masks U (nonempty) with zero induced sum
  std::vector<bool> edge_in_some_balanced_set;         // per edge id; support edges only are meaningful
  std::vector<std::pair<int, int>> balanced_pairs;     // (e, f) with e < f
};

inline BalancedSetReport balanced_sets(const Graph& g, const SignedEdgeVector& x, int max_vertices = 14) {
  detail::SubsetTable t(g, detail::small_values(x), max_vertices);
  BalancedSetReport r{x, {}, std::vector<bool>(static_cast<std::size_t>(g.edge_count()), false), {}};
  std::uint64_t covered = 0;
  std::set<std::pair<int, int>> pairs;
  for (std::size_t U = 1; U < t.size(); ++U) {
    if (!t.balanced(U)) continue;
    r.balanced.push_back(U);
    covered |= t.pattern[U];
    if (__builtin_popcountll(t.pattern[U]) == 2) {
      const int i = __builtin_ctzll(t.pattern[U]);
      const int j = 63 - __builtin_clzll(t.pattern[U]);
      pairs.insert({t.support[static_cast<std::size_t>(i)], t.support[static_cast<std::size_t>(j)]});
    }
  }
  for (std::size_t i = 0; i < t.support.size(); ++i)
    if ((covered >> i) & 1) r.edge_in_some_balanced_set[static_cast<std::size_t>(t.support[i])] = true;
  r.balanced_pairs.assign(pairs.begin(), pairs.end());
  return r;
}

// ----------------------------------------------------------------- drops

struct DropWitness {
  enum class Kind { UnitEdge, MixedSet };
  Kind kind;
  int edge = -1;           // UnitEdge
  std::vector<int> set;    // MixedSet: the dropped S
  RatVector y;
  std::size_t extra_zero_row = 0;  // row of B zero on y but not on g
};

inline const char* to_string(DropWitness::Kind k) {
  return k == DropWitness::Kind::UnitEdge ? "UnitEdge" : "MixedSet";
}

// Row of B nonzero on g and zero on y, when supp(By) is strictly inside supp(Bg).
inline std::optional<std::size_t> reduction_row(const ConstraintSystem& sys, std::span<const Rational> g,
                                                std::span<const Rational> y) {
  if (is_zero(y)) return std::nullopt;
  RatVector bg = multiply(sys.B, g), by = multiply(sys.B, y);
  std::optional<std::size_t> extra;
  for (std::size_t i = 0; i < bg.size(); ++i) {
    if (bg[i] == 0 && by[i] != 0) return std::nullopt;
    if (bg[i] != 0 && by[i] == 0 && !extra) extra = i;
  }
  return extra;
}

inline std::optional<DropWitness> droppable_edge(const Graph& g, const SignedEdgeVector& x, int max_vertices = 14) {
  const auto supp = support_edges(x);
  if (supp.empty()) throw Error(ErrorKind::ZeroVector, "zero edge vector");
  if (supp.size() < 2) return std::nullopt;  // dropping the only edge leaves 0
  auto rep = balanced_sets(g, x, max_vertices);
  for (int e : supp) {
    if (rep.edge_in_some_balanced_set[static_cast<std::size_t>(e)]) continue;
    DropWitness w{DropWitness::Kind::UnitEdge, e, {}, to_rational(x), 0};
    w.y[static_cast<std::size_t>(e)] = 0;
    const auto& ed = g.edge(e);
    w.extra_zero_row = rank_row((std::uint64_t(1) << ed.u) | (std::uint64_t(1) << ed.v));
    return w;
  }
  return std::nullopt;
}

struct DropSearchOptions {
  std::size_t subset_cap = 10;
  int max_vertices = 14;
};

// A kernel vector of [B0] vanishing on S with full support on supp(g) \ S, if any.
inline std::optional<RatVector> kernel_drop(const ConstraintSystem& sys, const SignedEdgeVector& x,
                                            const std::vector<int>& S) {
  RatVector g = to_rational(x);
  EchelonBasis e(sys.n());
  for (auto r : zero_rows(sys, g)) e.insert(sys.B.row(r));
  for (int s : S) {
    RatVector u(sys.n());
    u[static_cast<std::size_t>(s)] = 1;
    e.insert(u);
  }
  auto basis = e.kernel();
  if (basis.empty()) return std::nullopt;
  std::set<int> dropped(S.begin(), S.end());
  for (int attempt = 1; attempt <= 8; ++attempt) {
    RatVector y(sys.n());
    Rational w = 1;
    for (const auto& b : basis) {
      for (std::size_t j = 0; j < y.size(); ++j) y[j] += w * b[j];
      w = w * (attempt + 1) + 1;
    }
    bool full = true;
    for (std::size_t j = 0; j < y.size(); ++j)
      if (x[j] != 0 && !dropped.count(static_cast<int>(j)) && y[j] == 0) full = false;
    if (full) return y;
  }
  return std::nullopt;
}

inline std::optional<DropWitness> mixed_drop_search(const Graph& g, const SignedEdgeVector& x,
                                                    const DropSearchOptions& opt = {}) {
  if (!mixed_sign(x) || !is_01(x)) throw Error(ErrorKind::BadParameter, "mixed_drop_search needs a mixed-sign 0/1 vector");
  const auto supp = support_edges(x);
  if (supp.size() > opt.subset_cap)
    throw Error(ErrorKind::CapExceeded, "support of " + std::to_string(supp.size()) + " edges exceeds the subset cap");
  const ConstraintSystem sys = rank_system(g, {opt.max_vertices, false});
  const RatVector gx = to_rational(x);
  const std::size_t k = supp.size();
  std::vector<std::uint32_t> masks;
  for (std::uint32_t m = 1; m + 1 < (std::uint32_t(1) << k); ++m) masks.push_back(m);
  std::stable_sort(masks.begin(), masks.end(),
                   [](std::uint32_t a, std::uint32_t b) { return __builtin_popcount(a) < __builtin_popcount(b); });
  auto mixed = [&](std::uint32_t m, bool inside) {
    bool pos = false, neg = false;
    for (std::size_t i = 0; i < k; ++i)
      if (((m >> i) & 1) == (inside ? 1u : 0u)) (x[static_cast<std::size_t>(supp[i])] > 0 ? pos : neg) = true;
    return pos && neg;
  };
  // Within the smallest working size, literal restrictions first, then the
  // remainder with the fewest components.
  std::optional<DropWitness> best;
  std::pair<int, std::size_t> best_key{};
  int best_size = -1;
  for (auto m : masks) {
    const int size = __builtin_popcount(m);
    if (best && size > best_size) break;
    if (!mixed(m, true) || !mixed(m, false)) continue;
    std::vector<int> S, rest;
    for (std::size_t i = 0; i < k; ++i) ((m >> i) & 1 ? S : rest).push_back(supp[i]);
    RatVector y = gx;
    for (int s : S) y[static_cast<std::size_t>(s)] = 0;
    std::optional<DropWitness> w;
    int literal = 0;
    if (auto row = reduction_row(sys, gx, y)) {
      w = DropWitness{DropWitness::Kind::MixedSet, -1, S, y, *row};
    } else if (auto ky = kernel_drop(sys, x, S)) {
      if (auto row = reduction_row(sys, gx, *ky)) w = DropWitness{DropWitness::Kind::MixedSet, -1, S, *ky, *row};
      literal = 1;
    }
    if (!w) continue;
    std::pair<int, std::size_t> key{literal, edge_components(g, rest).size()};
    if (!best || key < best_key) {
      best = w;
      best_key = key;
      best_size = size;
    }
  }
  return best;
}

// Subtraction argument: replace g by a witness of smaller support, or cancel
// one entry of g against it, until a circuit remains.
inline Circuit noncircuit_smaller_circuit(const ConstraintSystem& sys, std::span<const Rational> g0) {
  RatVector cur(g0.begin(), g0.end());
  auto first = is_circuit(sys, cur);
  if (first.is_circuit()) throw Error(ErrorKind::IsActuallyCircuit, "vector is already a circuit");
  if (first.verdict == CircuitDecision::Verdict::NotInKernel) throw Error(ErrorKind::NotInKernel, "A g != 0");
  const auto supp0 = support(RatVector(g0.begin(), g0.end()));
  while (true) {
    auto d = is_circuit(sys, cur);
    if (d.is_circuit()) break;
    const RatVector& y = d.witness;
    auto sy = support(y), sc = support(cur);
    if (sy.size() < sc.size()) {
      cur = y;
      continue;
    }
    std::size_t e = sc.front();
    for (std::size_t j : sc)
      if (y[j] != 0) {
        e = j;
        break;
      }
    Rational lambda = cur[e] / y[e];
    for (std::size_t j = 0; j < cur.size(); ++j) cur[j] -= lambda * y[j];
  }
  auto sc = support(cur);
  if (sc.size() >= supp0.size() || !reduction_row(sys, g0, cur))
    throw Error(ErrorKind::BadInstance, "subtraction did not shrink the support");
  return make_circuit(sys, cur);
}

inline Circuit noncircuit_smaller_circuit(const Graph& g, const SignedEdgeVector& x, int max_vertices = 14) {
  return noncircuit_smaller_circuit(rank_system(g, {max_vertices, false}), to_rational(x));
}

// ------------------------------------------------------- structure recognition

enum class StructureKind {
  None,
  AltPath,
  AltEvenCycle,
  RootedAltCycle,
  PseudoAltPath,
  PseudoAltCycle,
  DisconnectedComposite
};

inline const char* to_string(StructureKind k) {
  switch (k) {
    case StructureKind::None: return "None";
    case StructureKind::AltPath: return "AltPath";
    case StructureKind::AltEvenCycle: return "AltEvenCycle";
    case StructureKind::RootedAltCycle: return "RootedAltCycle";
    case StructureKind::PseudoAltPath: return "PseudoAltPath";
    case StructureKind::PseudoAltCycle: return "PseudoAltCycle";
    case StructureKind::DisconnectedComposite: return "DisconnectedComposite";
  }
  return "?";
}

namespace detail {

// Signs along a connected path or cycle in traversal order; nullopt otherwise.
struct Walked {
  bool cycle;
  std::vector<int> signs;
};

inline std::optional<Walked> trace_path_or_cycle(const Graph& g, const SignedEdgeVector& x, const std::vector<int>& es) {
  std::map<int, std::vector<int>> at;
  for (int e : es) {
    at[g.edge(e).u].push_back(e);
    at[g.edge(e).v].push_back(e);
  }
  int start = -1;
  for (auto& [v, inc] : at) {
    if (inc.size() > 2) return std::nullopt;
    if (inc.size() == 1 && start < 0) start = v;
  }
  const bool cycle = start < 0;
  if (cycle) start = at.begin()->first;
  if (cycle ? at.size() != es.size() : at.size() != es.size() + 1) return std::nullopt;
  Walked w{cycle, {}};
  std::set<int> used;
  int v = start;
  while (true) {
    int next = -1;
    for (int e : at[v])
      if (!used.count(e)) {
        next = e;
        break;
      }
    if (next < 0) break;
    used.insert(next);
    w.signs.push_back(x[static_cast<std::size_t>(next)] > 0 ? 1 : -1);
    v = g.edge(next).other(v);
  }
  if (used.size() != es.size()) return std::nullopt;
  return w;
}

// Maximal sign runs; for a cycle the runs are taken cyclically.
inline std::vector<std::pair<int, std::size_t>> runs(const Walked& w) {
  std::vector<int> s = w.signs;
  if (w.cycle) {
    std::size_t rot = 0;
    while (rot < s.size() && s[rot] == s[(rot + s.size() - 1) % s.size()]) ++rot;
    if (rot == s.size()) return {{s[0], s.size()}};
    std::rotate(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(rot), s.end());
  }
  std::vector<std::pair<int, std::size_t>> out;
  for (int x : s) {
    if (!out.empty() && out.back().first == x) ++out.back().second;
    else out.push_back({x, 1});
  }
  return out;
}

inline StructureKind connected_kind(const Graph& g, const SignedEdgeVector& x, const std::vector<int>& es) {
  auto w = trace_path_or_cycle(g, x, es);
  if (!w) return StructureKind::None;
  auto r = runs(*w);
  const std::size_t len = w->signs.size();
  const bool all_single = std::all_of(r.begin(), r.end(), [](auto p) { return p.second == 1; });
  if (!w->cycle) {
    if (r.size() >= 2 && all_single) return StructureKind::AltPath;
    if (r.size() >= 4 && std::all_of(r.begin(), r.end(), [](auto p) { return p.second >= 2; }))
      return StructureKind::PseudoAltPath;
    return StructureKind::None;
  }
  if (r.size() >= 2 && all_single && len % 2 == 0 && len >= 4) return StructureKind::AltEvenCycle;
  if (len % 2 == 1 && len >= 5 && r.size() == len - 1) return StructureKind::RootedAltCycle;
  if (r.size() >= 4) {
    for (int plus : {1, -1}) {
      bool ok = true;
      for (auto [s, n] : r) ok = ok && (s == plus ? n >= 2 : n >= 3);
      if (ok) return StructureKind::PseudoAltCycle;
    }
  }
  return StructureKind::None;
}

}  // namespace detail

inline StructureKind structure_recognizer(const Graph& g, const SignedEdgeVector& x) {
  if (!is_01(x)) return StructureKind::None;
  const auto supp = support_edges(x);
  if (supp.empty() || !mixed_sign(x)) return StructureKind::None;
  const auto comps = edge_components(g, supp);
  if (comps.size() == 1) return detail::connected_kind(g, x, comps.front());
  for (const auto& c : comps) {
    bool pos = false, neg = false;
    for (int e : c) (x[static_cast<std::size_t>(e)] > 0 ? pos : neg) = true;
    if (pos && neg && detail::connected_kind(g, x, c) == StructureKind::None) return StructureKind::None;
  }
  return StructureKind::DisconnectedComposite;
}

// --------------------------------------------------------------- classify

struct StructureReport {
  bool support_connected = false;
  std::vector<int> R1, R2;
  int diameter1 = -1, diameter2 = -1;
  std::string route;  // "witness-partition" or "exhaustive-partition"
  // The witness partition measured with distances taken in G[supp(g)]
  // instead of inside each part.
  int witness_support_metric_diameter = -1;
  bool holds() const { return support_connected && diameter1 >= 0 && diameter2 >= 0 && diameter1 <= 5 && diameter2 <= 5; }
};

struct Classification {
  bool is_circuit = false;
  std::optional<DropWitness> witness;
  std::optional<StructureReport> structure;  // case 2 only
};

namespace detail {

// Diameter of the graph formed by the edges R, -1 when disconnected. With
// `metric` set, distances are taken in the graph of `metric` instead.
inline int part_diameter(const Graph& g, const std::vector<int>& R, const std::vector<int>* metric = nullptr) {
  const std::size_t n = static_cast<std::size_t>(g.vertex_count());
  std::vector<std::vector<int>> adj(n);
  for (int e : metric ? *metric : R) {
    adj[static_cast<std::size_t>(g.edge(e).u)].push_back(g.edge(e).v);
    adj[static_cast<std::size_t>(g.edge(e).v)].push_back(g.edge(e).u);
  }
  std::vector<int> vs;
  std::vector<char> in(n, 0);
  for (int e : R)
    for (int v : {g.edge(e).u, g.edge(e).v})
      if (!in[static_cast<std::size_t>(v)]) {
        in[static_cast<std::size_t>(v)] = 1;
        vs.push_back(v);
      }
  int diam = 0;
  std::vector<int> dist(n), queue(n);
  for (int s : vs) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[static_cast<std::size_t>(s)] = 0;
    std::size_t head = 0, tail = 0;
    queue[tail++] = s;
    while (head < tail) {
      const int x = queue[head++];
      for (int y : adj[static_cast<std::size_t>(x)])
        if (dist[static_cast<std::size_t>(y)] < 0) {
          dist[static_cast<std::size_t>(y)] = dist[static_cast<std::size_t>(x)] + 1;
          queue[tail++] = y;
        }
    }
    for (int v : vs) {
      if (dist[static_cast<std::size_t>(v)] < 0) return -1;
      diam = std::max(diam, dist[static_cast<std::size_t>(v)]);
    }
  }
  return diam;
}

inline bool good_part(const Graph& g, const std::vector<int>& R, int& diam) {
  diam = R.empty() ? -1 : part_diameter(g, R);
  return diam >= 0 && diam <= 5;
}

inline std::optional<StructureReport> partition_search(const Graph& g, const std::vector<int>& supp) {
  const std::size_t k = supp.size();
  if (k > 20) throw Error(ErrorKind::CapExceeded, "support too large for the partition search");
  // fix supp[0] in R1 to skip mirrored partitions
  for (std::uint32_t m = 0; m < (std::uint32_t(1) << (k - 1)); ++m) {
    StructureReport s;
    s.support_connected = true;
    s.R1.push_back(supp[0]);
    for (std::size_t i = 1; i < k; ++i) ((m >> (i - 1)) & 1 ? s.R2 : s.R1).push_back(supp[i]);
    if (s.R2.empty()) continue;
    if (good_part(g, s.R1, s.diameter1) && good_part(g, s.R2, s.diameter2)) {
      s.route = "exhaustive-partition";
      return s;
    }
  }
  return std::nullopt;
}

}  // namespace detail

inline Classification classify_01(const Graph& g, const ConstraintSystem& rank_sys, const SignedEdgeVector& x) {
  Classification c;
  if (!is_01(x)) throw Error(ErrorKind::BadParameter, "classify_01 expects a 0/1 vector");
  const RatVector gx = to_rational(x);
  c.is_circuit = is_circuit(rank_sys, gx).is_circuit();
  if (c.is_circuit) return c;
  if ((c.witness = droppable_edge(g, x))) return c;

  const auto supp = support_edges(x);
  StructureReport s;
  s.support_connected = edges_connected(g, supp);
  // Partition from a smaller circuit y: S = supp(g) \ supp(y).
  Circuit y = noncircuit_smaller_circuit(rank_sys, gx);
  std::vector<int> S;
  for (int e : supp)
    if (y.vector[static_cast<std::size_t>(e)] == 0) S.push_back(e);
  c.witness = DropWitness{DropWitness::Kind::MixedSet, -1, S, to_rational(y.vector), *reduction_row(rank_sys, gx, to_rational(y.vector))};
  for (int e : supp) {
    const bool inS = std::binary_search(S.begin(), S.end(), e);
    const bool pos = x[static_cast<std::size_t>(e)] > 0;
    ((inS != pos) ? s.R1 : s.R2).push_back(e);
  }
  s.route = "witness-partition";
  if (!s.R1.empty() && !s.R2.empty())
    s.witness_support_metric_diameter =
        std::max(detail::part_diameter(g, s.R1, &supp), detail::part_diameter(g, s.R2, &supp));
  if (!s.R1.empty() && !s.R2.empty() && detail::good_part(g, s.R1, s.diameter1) &&
      detail::good_part(g, s.R2, s.diameter2) && s.support_connected) {
    c.structure = s;
    return c;
  }
  if (s.support_connected)
    if (auto found = detail::partition_search(g, supp)) {
      found->witness_support_metric_diameter = s.witness_support_metric_diameter;
      c.structure = *found;
      return c;
    }
  c.structure = s;  // reported as failing: holds() is false
  return c;
}

inline Classification classify_01(const Graph& g, const SignedEdgeVector& x, int max_vertices = 14) {
  return classify_01(g, rank_system(g, {max_vertices, false}), x);
}

// Machine-integer version of the dichotomy for exhaustive sweeps: no
// witnesses, only the outcome.
enum class Dichotomy { Circuit, UnitDrop, Structured, Violation };

inline const char* to_string(Dichotomy d) {
  switch (d) {
    case Dichotomy::Circuit: return "Circuit";
    case Dichotomy::UnitDrop: return "UnitDrop";
    case Dichotomy::Structured: return "Structured";
    case Dichotomy::Violation: return "Violation";
  }
  return "?";
}

inline Dichotomy dichotomy_fast(const Graph& g, const SignedEdgeVector& x, int max_vertices = 14) {
  detail::SubsetTable t(g, detail::small_values(x), max_vertices);
  if (detail::circuit_from_table(t)) return Dichotomy::Circuit;
  std::uint64_t covered = 0;
  for (std::size_t U = 1; U < t.size(); ++U)
    if (t.balanced(U)) covered |= t.pattern[U];
  const std::size_t k = t.support.size();
  if (k >= 2 && covered != (k == 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << k) - 1)) return Dichotomy::UnitDrop;
  if (detail::part_diameter(g, t.support) < 0) return Dichotomy::Violation;
  return detail::partition_search(g, t.support) ? Dichotomy::Structured : Dichotomy::Violation;
}

// ------------------------------------------------------------------- walks

inline void require_forest(const Graph& g, const std::vector<int>& F) {
  if (!is_forest(g, F)) throw Error(ErrorKind::NotAForest, "edge set is not a forest of the graph");
}

inline std::vector<int> sorted_edges(std::vector<int> F) {
  std::sort(F.begin(), F.end());
  return F;
}

// Trace through a sequence of forests, one step of length 1 between each pair.
inline WalkTrace forest_trace(const Graph& g, const std::vector<std::vector<int>>& seq) {
  WalkTrace t;
  t.points.push_back(forest_vector(g, seq.front()));
  for (std::size_t i = 1; i < seq.size(); ++i) {
    RatVector x = forest_vector(g, seq[i]);
    IntVector d(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) d[j] = Integer(x[j] - t.points.back()[j]);
    t.circuits_used.push_back(std::move(d));
    t.step_lengths.push_back(1);
    t.points.push_back(std::move(x));
  }
  return t;
}

struct ForestWalk {
  std::vector<std::vector<int>> forests;  // visited forests, first to last
  WalkTrace trace;
  std::string route;
  std::size_t length() const { return trace.length(); }
};

inline std::vector<int> set_minus(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  for (int x : a)
    if (std::find(b.begin(), b.end(), x) == b.end()) out.push_back(x);
  return out;
}

// Leaf edge e = uv of F: lowest edge id having a leaf endpoint u (the smaller
// vertex when both endpoints are leaves).
inline std::pair<int, int> leaf_edge(const Graph& g, const std::vector<int>& F) {
  std::map<int, int> deg;
  for (int e : F) {
    ++deg[g.edge(e).u];
    ++deg[g.edge(e).v];
  }
  for (int e : sorted_edges(F)) {
    const auto& ed = g.edge(e);
    const bool lu = deg[ed.u] == 1, lv = deg[ed.v] == 1;
    if (lu && lv) return {e, std::min(ed.u, ed.v)};
    if (lu) return {e, ed.u};
    if (lv) return {e, ed.v};
  }
  throw Error(ErrorKind::NotAForest, "no leaf edge");
}

inline std::vector<std::vector<int>> zero_to_forest_sequence(const Graph& g, const std::vector<int>& F) {
  if (F.empty()) return {{}};
  auto [e, u] = leaf_edge(g, F);
  const int v = g.edge(e).other(u);
  std::vector<int> Fv, rest;
  for (int f : sorted_edges(F)) {
    if (f == e) continue;
    (g.edge(f).touches(v) ? Fv : rest).push_back(f);
  }
  std::vector<std::vector<int>> seq{{}, {e}};
  std::vector<int> cur;
  if (!Fv.empty()) {
    cur = Fv;
    seq.push_back(cur);
    cur.push_back(e);
    seq.push_back(sorted_edges(cur));
  }
  if (!rest.empty()) {
    cur = Fv;
    cur.insert(cur.end(), rest.begin(), rest.end());
    seq.push_back(sorted_edges(cur));
    cur.push_back(e);
    seq.push_back(sorted_edges(cur));
  }
  return seq;
}

struct WalkOptions {
  bool validate = true;
  int max_vertices = 14;
};

inline void check_walk(const Graph& g, const ForestWalk& w, const WalkOptions& opt) {
  if (!opt.validate) return;
  if (auto v = validate_walk(mwf_system(g, {opt.max_vertices, false}), w.trace))
    throw Error(ErrorKind::BadInstance, "constructed walk invalid: " + v->message);
}

inline ForestWalk walk_zero_to_forest(const Graph& g, const std::vector<int>& F, const WalkOptions& opt = {}) {
  require_forest(g, F);
  ForestWalk w;
  w.forests = zero_to_forest_sequence(g, F);
  w.trace = forest_trace(g, w.forests);
  w.route = "leaf-edge";
  check_walk(g, w, opt);
  return w;
}

enum class ForestRoute { General, Complete };

namespace detail {

// Swap/unit steps between forests with at most 3 edges each.
inline std::vector<std::vector<int>> exchange_sequence(const Graph& g, std::vector<int> A, const std::vector<int>& B) {
  std::vector<std::vector<int>> seq{sorted_edges(A)};
  while (true) {
    auto out = set_minus(A, B), in = set_minus(B, A);
    if (out.empty() && in.empty()) break;
    if (in.empty()) {
      A = set_minus(A, {out.front()});
    } else if (out.empty()) {
      A.push_back(in.front());
    } else {
      const int b = in.front();
      int drop = out.front();
      // if A + b closes a cycle, drop an edge of that cycle outside B
      for (int a : out) {
        auto t = set_minus(A, {a});
        t.push_back(b);
        if (is_forest(g, t)) {
          drop = a;
          break;
        }
      }
      A = set_minus(A, {drop});
      A.push_back(b);
    }
    A = sorted_edges(A);
    seq.push_back(A);
  }
  return seq;
}

inline bool is_path3(const Graph& g, const std::vector<int>& F) {
  if (F.size() != 3 || !is_forest(g, F) || !edges_connected(g, F)) return false;
  std::map<int, int> deg;
  for (int e : F) {
    ++deg[g.edge(e).u];
    ++deg[g.edge(e).v];
  }
  for (auto [v, d] : deg)
    if (d > 2) return false;
  return true;
}

inline bool step_ok(const Graph& g, const ConstraintSystem& rank_sys, const std::vector<int>& a, const std::vector<int>& b) {
  if (!is_forest(g, a) || !is_forest(g, b) || sorted_edges(a) == sorted_edges(b)) return false;
  IntVector d(static_cast<std::size_t>(g.edge_count()), 0);
  for (int e : a) d[static_cast<std::size_t>(e)] -= 1;
  for (int e : b) d[static_cast<std::size_t>(e)] += 1;
  return is_circuit(rank_sys, d).is_circuit();
}

inline std::vector<std::vector<int>> all_forests(const Graph& g) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int e) {
    if (e == g.edge_count()) {
      out.push_back(cur);
      return;
    }
    rec(e + 1);
    cur.push_back(e);
    if (is_forest(g, cur)) rec(e + 1);
    cur.pop_back();
  };
  rec(0);
  return out;
}

// F (more than 3 edges) to a forest whose support is a path of 3 edges, in at
// most two steps, following the leaf-pair construction.
inline std::pair<std::vector<std::vector<int>>, std::string> to_path3(const Graph& g, const ConstraintSystem& rank_sys,
                                                                      const std::vector<int>& F) {
  std::map<int, int> deg;
  std::map<int, int> leaf_edge_of;
  for (int e : F) {
    ++deg[g.edge(e).u];
    ++deg[g.edge(e).v];
  }
  std::vector<int> leaves;
  for (auto [v, d] : deg)
    if (d == 1) leaves.push_back(v);
  for (int e : sorted_edges(F)) {
    if (deg[g.edge(e).u] == 1) leaf_edge_of[g.edge(e).u] = e;
    if (deg[g.edge(e).v] == 1) leaf_edge_of[g.edge(e).v] = e;
  }
  auto in_F = [&](int e) { return std::find(F.begin(), F.end(), e) != F.end(); };
  auto valid = [&](const std::vector<std::vector<int>>& seq) {
    if (!is_path3(g, seq.back())) return false;
    for (std::size_t i = 1; i < seq.size(); ++i)
      if (!step_ok(g, rank_sys, seq[i - 1], seq[i])) return false;
    return true;
  };
  // Prefer a leaf pair whose leaf edges do not close a triangle with uv.
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < leaves.size(); ++i)
    for (std::size_t j = i + 1; j < leaves.size(); ++j) pairs.push_back({leaves[i], leaves[j]});
  std::stable_sort(pairs.begin(), pairs.end(), [&](auto a, auto b) {
    auto tri = [&](std::pair<int, int> p) {
      int f = leaf_edge_of[p.first], h = leaf_edge_of[p.second];
      return f != h && g.edge(f).other(p.first) == g.edge(h).other(p.second);
    };
    return !tri(a) && tri(b);
  });
  for (auto [u, v] : pairs) {
    const int e = *g.edge_id(u, v);
    const int f = leaf_edge_of[u], h = leaf_edge_of[v];
    if (in_F(e)) {
      // e is its own component: swap it for two edges f' = ua, h' = vb.
      for (int fp : g.incident(u)) {
        const int a = g.edge(fp).other(u);
        if (in_F(fp) || a == v) continue;
        for (int hp : g.incident(v)) {
          const int b = g.edge(hp).other(v);
          if (in_F(hp) || b == u || b == a) continue;
          auto tilde = set_minus(F, {e});
          tilde.push_back(fp);
          tilde.push_back(hp);
          std::vector<std::vector<int>> seq{sorted_edges(F), sorted_edges(tilde), sorted_edges({e, fp, hp})};
          if (valid(seq)) return {seq, "e-in-F"};
        }
      }
      continue;
    }
    const int w = g.edge(f).other(u);
    if (w != g.edge(h).other(v)) {
      std::vector<std::vector<int>> seq{sorted_edges(F), sorted_edges({e, f, h})};
      if (valid(seq)) return {seq, "e-not-in-F"};
      continue;
    }
    for (int fp : g.incident(u)) {
      if (in_F(fp) || fp == e) continue;
      std::vector<std::vector<int>> seq{sorted_edges(F), sorted_edges({e, h}), sorted_edges({e, fp, h})};
      if (valid(seq)) return {seq, "triangle"};
    }
  }
  // No leaf pair works (F a star): search two forest steps toward any 3-edge path.
  const auto forests = all_forests(g);
  std::vector<std::vector<int>> level1;
  for (const auto& f1 : forests)
    if (step_ok(g, rank_sys, F, f1)) {
      if (is_path3(g, f1)) return {{sorted_edges(F), sorted_edges(f1)}, "fallback-search"};
      level1.push_back(f1);
    }
  for (const auto& f1 : level1)
    for (const auto& f2 : forests)
      if (is_path3(g, f2) && step_ok(g, rank_sys, f1, f2))
        return {{sorted_edges(F), sorted_edges(f1), sorted_edges(f2)}, "fallback-search"};
  throw Error(ErrorKind::Unreachable, "no 3-edge path forest within two steps");
}

}  // namespace detail

inline ForestWalk walk_forest_to_forest(const Graph& g, const std::vector<int>& F1, const std::vector<int>& F2,
                                        ForestRoute route = ForestRoute::General, const WalkOptions& opt = {}) {
  require_forest(g, F1);
  require_forest(g, F2);
  ForestWalk w;
  if (sorted_edges(F1) == sorted_edges(F2)) {
    w.forests = {sorted_edges(F1)};
    w.route = "identical";
  } else if (route == ForestRoute::General) {
    auto a = zero_to_forest_sequence(g, F1), b = zero_to_forest_sequence(g, F2);
    std::reverse(a.begin(), a.end());
    std::vector<std::vector<int>> seq(a.begin(), a.end() - 1);  // drop the empty forest
    if (seq.empty()) seq.push_back({});
    for (std::size_t i = 1; i < b.size(); ++i)
      if (seq.back() != b[i]) seq.push_back(b[i]);
    if (F2.empty()) seq.push_back({});
    w.forests = seq;
    w.route = "leaf-edge-splice";
  } else {
    if (!g.is_complete() || g.vertex_count() < 5)
      throw Error(ErrorKind::BadInstance, "the complete-graph route needs K_n with n >= 5");
    const ConstraintSystem rs = rank_system(g, {opt.max_vertices, false});
    std::vector<std::vector<int>> head{sorted_edges(F1)}, tail{sorted_edges(F2)};
    std::string r1 = "small", r2 = "small";
    if (F1.size() > 3) std::tie(head, r1) = detail::to_path3(g, rs, F1);
    if (F2.size() > 3) std::tie(tail, r2) = detail::to_path3(g, rs, F2);
    std::reverse(tail.begin(), tail.end());
    auto mid = detail::exchange_sequence(g, head.back(), tail.front());
    std::vector<std::vector<int>> seq = head;
    for (std::size_t i = 1; i < mid.size(); ++i) seq.push_back(mid[i]);
    for (std::size_t i = 1; i < tail.size(); ++i) seq.push_back(tail[i]);
    w.forests = seq;
    w.route = "path3:" + r1 + "/" + r2;
  }
  w.trace = forest_trace(g, w.forests);
  check_walk(g, w, opt);
  return w;
}

// --------------------------------------------------------------- lower bound

struct LowerBoundReport {
  bool confirmed = false;     // X(F) not reachable from 0 in at most 2 steps
  std::size_t explored = 0;   // distinct points within two steps of 0
  std::size_t circuit_count = 0;
};

struct LowerBoundOptions {
  std::size_t max_vars = 12;
  int max_vertices = 14;
};

inline LowerBoundReport lower_bound_check(const Graph& g, const std::vector<int>& F, const LowerBoundOptions& opt = {}) {
  require_forest(g, F);
  if (g.vertex_count() < 4 || F.size() < 3) throw Error(ErrorKind::BadInstance, "needs |V| >= 4 and |F| >= 3");
  std::vector<int> all(static_cast<std::size_t>(g.edge_count()));
  std::iota(all.begin(), all.end(), 0);
  const std::size_t comps = edge_components(g, all).size() +
                            static_cast<std::size_t>(g.vertex_count() - static_cast<int>(edge_set_vertices(g, all).size()));
  if (F.size() + comps != static_cast<std::size_t>(g.vertex_count()))
    throw Error(ErrorKind::BadInstance, "F is not a spanning forest");

  const ConstraintSystem sys = mwf_system(g, {opt.max_vertices, false});
  EnumerationOptions eo;
  eo.max_vars = opt.max_vars;
  const auto pool = enumerate_circuits(sys, eo);
  LowerBoundReport rep;
  rep.circuit_count = pool.size();

  // B g for every circuit, in machine integers (entries of B are 0/+-1).
  std::vector<std::vector<long long>> bg;
  for (const auto& c : pool) {
    std::vector<long long> v(sys.m_B(), 0);
    for (std::size_t i = 0; i < sys.m_B(); ++i)
      for (std::size_t j = 0; j < sys.n(); ++j)
        if (sys.B(i, j) != 0 && c.vector[j] != 0) v[i] += sys.B(i, j).get_num().get_si() * c.vector[j].get_si();
    bg.push_back(std::move(v));
  }
  const RatVector target = forest_vector(g, F);
  std::set<std::string> seen;
  auto expand = [&](const RatVector& x) {
    std::vector<RatVector> next;
    RatVector bx = multiply(sys.B, x);
    for (std::size_t c = 0; c < pool.size(); ++c)
      for (int sign : {1, -1}) {
        bool feasible = true;
        std::optional<Rational> eps;
        for (std::size_t i = 0; i < sys.m_B() && feasible; ++i) {
          const long long v = sign * bg[c][i];
          if (v == 0) continue;
          const Rational slack = sys.d[i] - bx[i];
          if (slack == 0) {
            if (v > 0) feasible = false;
            continue;
          }
          if (v > 0) {
            Rational t = slack / Rational(static_cast<long>(v));
            if (!eps || t < *eps) eps = t;
          }
        }
        if (!feasible || !eps) continue;
        IntVector dir = sign > 0 ? pool[c].vector : negate(pool[c].vector);
        next.push_back(advance(x, *eps, dir));
      }
    return next;
  };
  const RatVector zero(sys.n());
  seen.insert(point_key(zero));
  bool reached = zero == target;
  for (const auto& x1 : expand(zero)) {
    seen.insert(point_key(x1));
    reached = reached || x1 == target;
    for (const auto& x2 : expand(x1)) {
      seen.insert(point_key(x2));
      reached = reached || x2 == target;
    }
  }
  rep.explored = seen.size();
  rep.confirmed = !reached;
  return rep;
}

// Uniformly shuffled greedy forest with a random target size.
inline std::vector<int> random_forest(const Graph& g, std::mt19937_64& rng) {
  std::vector<int> es(static_cast<std::size_t>(g.edge_count()));
  std::iota(es.begin(), es.end(), 0);
  std::shuffle(es.begin(), es.end(), rng);
  const std::size_t want = std::uniform_int_distribution<std::size_t>(0, static_cast<std::size_t>(std::max(0, g.vertex_count() - 1)))(rng);
  std::vector<int> F;
  for (int e : es) {
    if (F.size() >= want) break;
    F.push_back(e);
    if (!is_forest(g, F)) F.pop_back();
  }
  return sorted_edges(F);
}

}  // namespace circuitkit::forest
