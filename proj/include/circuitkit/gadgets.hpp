#pragma once
// Exponential-imbalance gadgets and the zig-zag quadrilateral.

#include <functional>
#include <set>

#include "circuitkit/coloring.hpp"
#include "circuitkit/enumerate.hpp"
#include "circuitkit/graph.hpp"

namespace circuitkit::gadgets {

enum class FamilyKind { Induced5Sets, Paths4, AllSize3Sets, Paths3, CyclesUpTo4, StarsAtLeast2, MaximalStars };

inline const char* to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::Induced5Sets: return "Induced5Sets";
    case FamilyKind::Paths4: return "Paths4";
    case FamilyKind::AllSize3Sets: return "AllSize3Sets";
    case FamilyKind::Paths3: return "Paths3";
    case FamilyKind::CyclesUpTo4: return "CyclesUpTo4";
    case FamilyKind::StarsAtLeast2: return "StarsAtLeast2";
    case FamilyKind::MaximalStars: return "MaximalStars";
  }
  return "?";
}

inline FamilyKind family_from_string(const std::string& s) {
  for (auto k : {FamilyKind::Induced5Sets, FamilyKind::Paths4, FamilyKind::AllSize3Sets, FamilyKind::Paths3,
                 FamilyKind::CyclesUpTo4, FamilyKind::StarsAtLeast2, FamilyKind::MaximalStars})
    if (s == to_string(k)) return k;
  throw Error(ErrorKind::BadParameter, "unknown family " + s);
}

namespace detail {

using EdgeSet = std::vector<int>;

// Edge sets of simple paths with exactly `len` edges.
inline std::set<EdgeSet> paths(const Graph& g, int len) {
  std::set<EdgeSet> out;
  std::vector<int> used_v(static_cast<std::size_t>(g.vertex_count()), 0);
  EdgeSet cur;
  std::function<void(int)> dfs = [&](int v) {
    if (static_cast<int>(cur.size()) == len) {
      EdgeSet s = cur;
      std::sort(s.begin(), s.end());
      out.insert(s);
      return;
    }
    for (int e : g.incident(v)) {
      int w = g.edge(e).other(v);
      if (used_v[static_cast<std::size_t>(w)]) continue;
      used_v[static_cast<std::size_t>(w)] = 1;
      cur.push_back(e);
      dfs(w);
      cur.pop_back();
      used_v[static_cast<std::size_t>(w)] = 0;
    }
  };
  for (int v = 0; v < g.vertex_count(); ++v) {
    used_v[static_cast<std::size_t>(v)] = 1;
    dfs(v);
    used_v[static_cast<std::size_t>(v)] = 0;
  }
  return out;
}

inline std::set<EdgeSet> cycles_up_to(const Graph& g, int max_len) {
  std::set<EdgeSet> out;
  for (int len = 2; len < max_len; ++len)
    for (const auto& p : paths(g, len)) {
      // endpoints of the path are its degree-1 vertices
      std::map<int, int> deg;
      for (int e : p) {
        ++deg[g.edge(e).u];
        ++deg[g.edge(e).v];
      }
      std::vector<int> ends;
      for (auto [v, k] : deg)
        if (k == 1) ends.push_back(v);
      if (auto c = g.edge_id(ends[0], ends[1])) {
        EdgeSet s = p;
        s.push_back(*c);
        std::sort(s.begin(), s.end());
        out.insert(s);
      }
    }
  return out;
}

inline std::set<EdgeSet> family(const Graph& g, FamilyKind kind) {
  std::set<EdgeSet> out;
  const int n = g.vertex_count(), m = g.edge_count();
  switch (kind) {
    case FamilyKind::Induced5Sets: {
      if (n > 30) throw Error(ErrorKind::CapExceeded, "too many vertices for 5-set enumeration");
      for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
        if (__builtin_popcountll(mask) != 5) continue;
        auto es = g.induced_edges(mask);
        if (!es.empty()) out.insert(es);
      }
      if (n < 5 && m > 0) {
        std::vector<int> all(static_cast<std::size_t>(m));
        std::iota(all.begin(), all.end(), 0);
        out.insert(all);
      }
      break;
    }
    case FamilyKind::Paths4: out = paths(g, 4); break;
    case FamilyKind::Paths3: out = paths(g, 3); break;
    case FamilyKind::AllSize3Sets:
      for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
          for (int c = b + 1; c < m; ++c) out.insert({a, b, c});
      break;
    case FamilyKind::CyclesUpTo4: out = cycles_up_to(g, 4); break;
    case FamilyKind::StarsAtLeast2:
      for (int v = 0; v < n; ++v) {
        const auto& inc = g.incident(v);
        const std::size_t d = inc.size();
        if (d > 20) throw Error(ErrorKind::CapExceeded, "vertex degree too large for star enumeration");
        for (std::uint32_t s = 0; s < (std::uint32_t(1) << d); ++s) {
          if (__builtin_popcount(s) < 2) continue;
          EdgeSet es;
          for (std::size_t i = 0; i < d; ++i)
            if ((s >> i) & 1) es.push_back(inc[i]);
          std::sort(es.begin(), es.end());
          out.insert(es);
        }
      }
      break;
    case FamilyKind::MaximalStars: {
      std::vector<EdgeSet> stars;
      for (int v = 0; v < n; ++v) {
        EdgeSet es = g.incident(v);
        std::sort(es.begin(), es.end());
        if (!es.empty()) stars.push_back(es);
      }
      for (const auto& s : stars) {
        bool dominated = false;
        for (const auto& t : stars)
          if (t.size() > s.size() && std::includes(t.begin(), t.end(), s.begin(), s.end())) dominated = true;
        if (!dominated) out.insert(s);
      }
      break;
    }
  }
  return out;
}

}  // namespace detail

// B = [B'; I] with one 0/1 row per family member. Right-hand sides default to
// 1; circuits only depend on A and B.
inline ConstraintSystem build_family_system(const Graph& g, FamilyKind kind, const Rational& rhs = 1) {
  const std::size_t m = static_cast<std::size_t>(g.edge_count());
  ConstraintSystem sys(m);
  for (int e = 0; e < g.edge_count(); ++e) sys.variable_labels[static_cast<std::size_t>(e)] = g.edge_name(e);
  std::set<detail::EdgeSet> rows_seen;
  for (const auto& h : detail::family(g, kind)) {
    RatVector row(m);
    std::string label = "H{";
    for (std::size_t i = 0; i < h.size(); ++i) {
      row[static_cast<std::size_t>(h[i])] = 1;
      label += (i ? "," : "") + g.edge_name(h[i]);
    }
    rows_seen.insert(h);
    sys.add_inequality(row, rhs, label + "}");
  }
  for (int e = 0; e < g.edge_count(); ++e) {
    if (rows_seen.count({e})) continue;
    RatVector row(m);
    row[static_cast<std::size_t>(e)] = 1;
    sys.add_inequality(row, rhs, "x(" + g.edge_name(e) + ")");
  }
  return sys;
}

enum class GadgetKind { Thm21, Thm22, Thm23, Thm24, Coloring };

inline const char* to_string(GadgetKind k) {
  switch (k) {
    case GadgetKind::Thm21: return "thm21";
    case GadgetKind::Thm22: return "thm22";
    case GadgetKind::Thm23: return "thm23";
    case GadgetKind::Thm24: return "thm24";
    case GadgetKind::Coloring: return "coloring";
  }
  return "?";
}

// h(first) = ratio * h(second) for every kernel vector h.
struct Relation {
  std::size_t first, second;
  Rational ratio;
};

struct GadgetInstance {
  GadgetKind kind;
  int k;
  Graph graph;
  ConstraintSystem system;
  RatVector seed_vector;
  std::vector<Relation> halving_pairs;
  std::vector<std::size_t> designated_entries;
  FamilyKind family = FamilyKind::Induced5Sets;  // unused for Coloring
};

struct GadgetOptions {
  std::optional<FamilyKind> family;  // Thm21 accepts Induced5Sets, Paths4, AllSize3Sets
  bool tail = true;                  // Thm21/Thm22: keep the closing edge w_k t_{k+1} / u_k t_{k+1}
};

namespace detail {

inline Rational pow_rat(const Rational& base, int e) {
  Rational r = 1;
  for (int i = 0; i < std::abs(e); ++i) r *= base;
  return e < 0 ? Rational(1 / r) : r;
}

struct Builder {
  Graph g;
  std::map<std::string, Rational> value;
  int v(const std::string& name) {
    if (auto x = g.vertex_by_name(name)) return *x;
    return g.add_vertex(name);
  }
  int e(const std::string& a, const std::string& b, const Rational& val) {
    int id = g.add_edge(v(a), v(b), a + b);
    value[a + b] = val;
    return id;
  }
  RatVector seed() const {
    RatVector s(static_cast<std::size_t>(g.edge_count()));
    for (int id = 0; id < g.edge_count(); ++id) s[static_cast<std::size_t>(id)] = value.at(g.edge_name(id));
    return s;
  }
};

inline std::string nm(const char* p, int i) { return std::string(p) + std::to_string(i); }

}  // namespace detail

inline GadgetInstance gadget(GadgetKind kind, int k, const GadgetOptions& opt = {}) {
  using detail::nm;
  using detail::pow_rat;
  if (k < 1) throw Error(ErrorKind::BadParameter, "k must be >= 1");
  GadgetInstance inst{kind, k, {}, {}, {}, {}, {}};
  detail::Builder b;
  const Rational m2(-2), half(1, 2);
  std::vector<int> chain;
  Rational ratio;
  switch (kind) {
    case GadgetKind::Thm21: {
      b.v("w0");
      const int last = opt.tail ? k + 1 : k;
      for (int i = 1; i <= k; ++i) {
        chain.push_back(b.e(nm("w", i - 1), nm("t", i), pow_rat(m2, -(i - 1))));
        b.e(nm("t", i), nm("u", i), 0);
        b.e(nm("t", i), nm("v", i), 0);
        b.e(nm("u", i), nm("w", i), pow_rat(m2, -i));
        b.e(nm("v", i), nm("w", i), pow_rat(m2, -i));
      }
      if (last > k) chain.push_back(b.e(nm("w", k), nm("t", k + 1), pow_rat(m2, -k)));
      inst.family = opt.family.value_or(FamilyKind::Induced5Sets);
      if (inst.family != FamilyKind::Induced5Sets && inst.family != FamilyKind::Paths4 &&
          inst.family != FamilyKind::AllSize3Sets)
        throw Error(ErrorKind::BadParameter, "thm21 takes Induced5Sets, Paths4 or AllSize3Sets");
      ratio = -2;
      break;
    }
    case GadgetKind::Thm22: {
      for (int i = 1; i <= k; ++i) {
        chain.push_back(b.e(nm("u", i - 1), nm("t", i), pow_rat(m2, -(i - 1))));
        b.e(nm("t", i), nm("u", i), pow_rat(m2, -i));
        b.e(nm("u", i), nm("v", i), pow_rat(m2, -i));
        b.e(nm("v", i), nm("w", i), pow_rat(m2, -(i - 1)));
      }
      if (opt.tail) chain.push_back(b.e(nm("u", k), nm("t", k + 1), pow_rat(m2, -k)));
      inst.family = opt.family.value_or(FamilyKind::Paths3);
      ratio = -2;
      break;
    }
    case GadgetKind::Thm23: {
      for (int i = 0; i <= k; ++i) {
        chain.push_back(b.e(nm("u", i), nm("v", i), pow_rat(m2, -i)));
        if (i == k) break;
        b.e(nm("u", i), nm("u", i + 1), pow_rat(m2, -(i + 1)));
        b.e(nm("u", i), nm("v", i + 1), 0);
        b.e(nm("v", i), nm("u", i + 1), pow_rat(m2, -(i + 1)));
        b.e(nm("v", i), nm("v", i + 1), 0);
      }
      inst.family = opt.family.value_or(FamilyKind::CyclesUpTo4);
      ratio = -2;
      break;
    }
    case GadgetKind::Thm24: {
      for (int i = 0; i <= k; ++i) {
        chain.push_back(b.e(nm("u", i), nm("v", i), pow_rat(half, i)));
        if (i == k) break;
        b.e(nm("v", i), nm("u", i + 1), -pow_rat(half, i + 1));
        b.e(nm("v", i), nm("v", i + 1), -pow_rat(half, i + 1));
      }
      inst.family = opt.family.value_or(FamilyKind::StarsAtLeast2);
      ratio = 2;
      break;
    }
    case GadgetKind::Coloring:
      break;
  }

  if (kind != GadgetKind::Coloring) {
    inst.graph = b.g;
    inst.system = build_family_system(inst.graph, inst.family);
    inst.seed_vector = b.seed();
    for (int e : chain) inst.designated_entries.push_back(static_cast<std::size_t>(e));
    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
      inst.halving_pairs.push_back({static_cast<std::size_t>(chain[i]), static_cast<std::size_t>(chain[i + 1]), ratio});
    return inst;
  }

  // Coloring gadget: triangles u_i v_i w_i joined by v_i u_{i+1}, four colors a,b,c,d.
  if (k < 3 || k % 2 == 0) throw Error(ErrorKind::BadParameter, "coloring gadget needs odd k >= 3");
  Graph g;
  for (int i = 0; i <= k; ++i) {
    g.add_vertex(nm("u", i));
    g.add_vertex(nm("v", i));
    g.add_vertex(nm("w", i));
  }
  auto V = [&](const char* p, int i) { return *g.vertex_by_name(nm(p, i)); };
  for (int i = 0; i <= k; ++i) {
    g.add_edge(V("u", i), V("v", i));
    g.add_edge(V("v", i), V("w", i));
    g.add_edge(V("w", i), V("u", i));
    if (i < k) g.add_edge(V("v", i), V("u", i + 1));
  }
  const int T = 4;
  RatVector s(static_cast<std::size_t>(g.vertex_count() * T));
  auto put = [&](const char* p, int i, std::array<Rational, 4> vals) {
    for (int c = 0; c < T; ++c) s[coloring::var_index(V(p, i), c, T)] = vals[static_cast<std::size_t>(c)];
  };
  for (int i = 0; i <= k; i += 2) {
    const Rational p0 = pow_rat(half, i), p1 = pow_rat(half, i + 1), p2 = pow_rat(half, i + 2);
    put("u", i, {p0, -p1, -p1, 0});
    put("v", i, {0, p1, -p1, 0});
    put("w", i, {0, -p1, p1, 0});
    put("u", i + 1, {-p2, 0, p1, -p2});
    put("v", i + 1, {-p2, 0, 0, p2});
    put("w", i + 1, {p2, 0, 0, -p2});
  }
  inst.graph = g;
  inst.system = coloring::coloring_system(g, T);
  inst.seed_vector = s;
  for (int i = 0; i <= k; i += 2) inst.designated_entries.push_back(coloring::var_index(V("u", i), 0, T));
  for (std::size_t i = 0; i + 1 < inst.designated_entries.size(); ++i)
    inst.halving_pairs.push_back({inst.designated_entries[i], inst.designated_entries[i + 1], 4});
  return inst;
}

struct HalvingCounterexample {
  RatVector vector;  // violating kernel vector (or the seed itself)
  Relation relation;
};

// Every vector h with A h = 0 and (B h)_i = 0 wherever (B g)_i = 0 must obey
// the relations; checking a kernel basis suffices since they are linear.
inline std::optional<HalvingCounterexample> verify_halving(const GadgetInstance& inst, const RatVector& seed) {
  const auto& sys = inst.system;
  EchelonBasis e(sys.n());
  for (std::size_t r = 0; r < sys.m_A(); ++r) e.insert(sys.A.row(r));
  for (auto r : zero_rows(sys, seed)) e.insert(sys.B.row(r));
  auto basis = e.kernel();
  basis.insert(basis.begin(), seed);
  for (const auto& h : basis)
    for (const auto& rel : inst.halving_pairs)
      if (h[rel.first] != rel.ratio * h[rel.second]) return HalvingCounterexample{h, rel};
  return std::nullopt;
}

inline std::optional<HalvingCounterexample> verify_halving(const GadgetInstance& inst) {
  return verify_halving(inst, inst.seed_vector);
}

// ------------------------------------------------------------- zig-zag

struct ZigzagParams {
  Rational M, eps;
};

struct Zigzag {
  ConstraintSystem system;
  std::vector<RatVector> vertices;  // (0,0), (eps,0), (M+1+eps,M), (M+1+eps,M+eps)
};

inline Zigzag zigzag_system(const ZigzagParams& p) {
  if (p.eps <= 0 || p.eps >= p.M)
    throw Error(ErrorKind::BadParameter, "zig-zag needs 0 < eps < M");
  const Rational& M = p.M;
  const Rational& e = p.eps;
  Zigzag z;
  z.system = ConstraintSystem(2);
  z.system.variable_labels = {"x", "y"};
  auto row = [](Rational a, Rational b) { return RatVector{a, b}; };
  z.system.add_inequality(row(0, -1), 0, "bottom");                               // y >= 0
  z.system.add_inequality(row(M, -(M + 1)), M * e, "lower-long");                  // through (eps,0), (M+1+eps,M)
  z.system.add_inequality(row(1, 0), M + 1 + e, "right");                          // x <= M+1+eps
  z.system.add_inequality(row(-(M + e), M + 1 + e), 0, "upper-long");             // through (0,0), (M+1+eps,M+eps)
  z.vertices = {{0, 0}, {e, 0}, {M + 1 + e, M}, {M + 1 + e, M + e}};
  return z;
}

inline bool is_01(const IntVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Integer& z) { return z == 0 || z == 1 || z == -1; });
}

}  // namespace circuitkit::gadgets
