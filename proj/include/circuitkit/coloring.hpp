#pragma once
// Fractional coloring polytope: x(v,i) >= 0, sum_i x(v,i) = 1, x(u,i) + x(v,i) <= 1.
// Proper colorings are its 0/1 vertices; two of them differ by a circuit
// exactly when the difference graph G(s) below is connected.

#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "circuitkit/circuits.hpp"
#include "circuitkit/graph.hpp"

namespace circuitkit::coloring {

inline std::size_t var_index(int v, int color, int palette_size) {
  return static_cast<std::size_t>(v * palette_size + color);
}

inline ConstraintSystem coloring_system(const Graph& g, int palette_size) {
  if (palette_size < 1) throw Error(ErrorKind::BadParameter, "palette_size must be >= 1");
  const std::size_t n = static_cast<std::size_t>(g.vertex_count() * palette_size);
  ConstraintSystem sys(n);
  for (int v = 0; v < g.vertex_count(); ++v)
    for (int i = 0; i < palette_size; ++i)
      sys.variable_labels[var_index(v, i, palette_size)] = "(" + g.vertex_name(v) + "," + std::to_string(i) + ")";
  for (int v = 0; v < g.vertex_count(); ++v) {
    RatVector row(n);
    for (int i = 0; i < palette_size; ++i) row[var_index(v, i, palette_size)] = 1;
    sys.add_equality(row, 1, "sum(" + g.vertex_name(v) + ")");
  }
  for (int e = 0; e < g.edge_count(); ++e)
    for (int i = 0; i < palette_size; ++i) {
      RatVector row(n);
      row[var_index(g.edge(e).u, i, palette_size)] = 1;
      row[var_index(g.edge(e).v, i, palette_size)] = 1;
      sys.add_inequality(row, 1, "edge(" + g.edge_name(e) + "," + std::to_string(i) + ")");
    }
  for (std::size_t j = 0; j < n; ++j) {
    RatVector row(n);
    row[j] = -1;
    sys.add_inequality(row, 0, "nonneg" + sys.variable_labels[j]);
  }
  return sys;
}

// Colors are ids 0..palette_size-1.
struct Coloring {
  std::vector<int> assignment;
  int palette_size = 0;

  int operator[](int v) const { return assignment[static_cast<std::size_t>(v)]; }
  bool operator==(const Coloring& o) const = default;
  bool operator<(const Coloring& o) const { return assignment < o.assignment; }
};

inline void check_shape(const Graph& g, const Coloring& c) {
  if (static_cast<int>(c.assignment.size()) != g.vertex_count())
    throw Error(ErrorKind::DimensionMismatch, "coloring covers " + std::to_string(c.assignment.size()) +
                                                  " vertices, graph has " + std::to_string(g.vertex_count()));
  for (int col : c.assignment)
    if (col < 0 || col >= c.palette_size) throw Error(ErrorKind::BadParameter, "color outside the palette");
}

inline bool is_proper(const Graph& g, const Coloring& c) {
  check_shape(g, c);
  for (const auto& e : g.edges())
    if (c[e.u] == c[e.v]) return false;
  return true;
}

inline RatVector char_vector(const Coloring& c) {
  RatVector x(c.assignment.size() * static_cast<std::size_t>(c.palette_size));
  for (std::size_t v = 0; v < c.assignment.size(); ++v) x[var_index(static_cast<int>(v), c.assignment[v], c.palette_size)] = 1;
  return x;
}

inline Coloring decode(std::span<const Rational> x, int vertex_count, int palette_size) {
  if (x.size() != static_cast<std::size_t>(vertex_count * palette_size))
    throw Error(ErrorKind::DimensionMismatch, "vector length is not |V| * palette");
  Coloring c{std::vector<int>(static_cast<std::size_t>(vertex_count), -1), palette_size};
  for (int v = 0; v < vertex_count; ++v)
    for (int i = 0; i < palette_size; ++i) {
      const Rational& q = x[var_index(v, i, palette_size)];
      if (q == 0) continue;
      if (q != 1 || c.assignment[static_cast<std::size_t>(v)] != -1)
        throw Error(ErrorKind::NotIntegral, "entry (" + std::to_string(v) + "," + std::to_string(i) + ") = " +
                                                q.get_str() + " is not a coloring value");
      c.assignment[static_cast<std::size_t>(v)] = i;
    }
  for (int col : c.assignment)
    if (col < 0) throw Error(ErrorKind::NotIntegral, "a vertex carries no color");
  return c;
}

inline IntVector difference(const Coloring& from, const Coloring& to) {
  IntVector s(from.assignment.size() * static_cast<std::size_t>(from.palette_size), 0);
  for (std::size_t v = 0; v < from.assignment.size(); ++v) {
    if (from.assignment[v] == to.assignment[v]) continue;
    s[var_index(static_cast<int>(v), from.assignment[v], from.palette_size)] = -1;
    s[var_index(static_cast<int>(v), to.assignment[v], from.palette_size)] = 1;
  }
  return s;
}

struct DifferenceGraph {
  std::vector<int> vertices;  // V(s)
  std::vector<int> edges;     // E(s), edge ids
  IntVector s;

  bool connected(const Graph& g) const {
    if (vertices.empty()) return false;
    std::set<int> vs(vertices.begin(), vertices.end());
    std::set<int> seen{vertices.front()};
    std::deque<int> q{vertices.front()};
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      for (int e : edges) {
        if (!g.edge(e).touches(x)) continue;
        int y = g.edge(e).other(x);
        if (seen.insert(y).second) q.push_back(y);
      }
    }
    return seen.size() == vs.size();
  }
};

inline DifferenceGraph difference_graph(const Graph& g, const IntVector& s, int palette_size) {
  DifferenceGraph d{{}, {}, s};
  auto at = [&](int v, int i) -> const Integer& { return s[var_index(v, i, palette_size)]; };
  for (int v = 0; v < g.vertex_count(); ++v)
    for (int i = 0; i < palette_size; ++i)
      if (at(v, i) != 0) {
        d.vertices.push_back(v);
        break;
      }
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto& ed = g.edge(e);
    for (int i = 0; i < palette_size; ++i)
      if (at(ed.u, i) + at(ed.v, i) == 0 && at(ed.u, i) != 0) {
        d.edges.push_back(e);
        break;
      }
  }
  return d;
}

struct DifferenceTest {
  bool is_circuit;
  DifferenceGraph graph;
};

inline DifferenceTest difference_is_circuit(const Graph& g, const Coloring& c1, const Coloring& c2) {
  if (c1.palette_size != c2.palette_size) throw Error(ErrorKind::BadParameter, "palettes differ");
  if (!is_proper(g, c1) || !is_proper(g, c2)) throw Error(ErrorKind::ImproperColoring, "both colorings must be proper");
  if (c1 == c2) throw Error(ErrorKind::EqualColorings, "the colorings coincide");
  DifferenceGraph d = difference_graph(g, difference(c1, c2), c1.palette_size);
  const bool ok = d.connected(g);
  return {ok, std::move(d)};
}

// ------------------------------------------------------------ Kempe chains

struct KempeChain {
  std::vector<int> colors;
  std::vector<int> vertices;  // sorted
};

inline void check_color_set(const Coloring& c, const std::vector<int>& colors) {
  std::set<int> cs(colors.begin(), colors.end());
  if (colors.size() < 2 || cs.size() != colors.size())
    throw Error(ErrorKind::BadColorSet, "need at least two distinct colors");
  for (int a : colors)
    if (a < 0 || a >= c.palette_size) throw Error(ErrorKind::BadColorSet, "color " + std::to_string(a) + " not in palette");
}

inline std::vector<KempeChain> kempe_chains(const Graph& g, const Coloring& c, const std::vector<int>& colors) {
  check_color_set(c, colors);
  if (!is_proper(g, c)) throw Error(ErrorKind::ImproperColoring, "Kempe chains need a proper coloring");
  std::set<int> cs(colors.begin(), colors.end());
  std::vector<int> comp(static_cast<std::size_t>(g.vertex_count()), -1);
  std::vector<KempeChain> out;
  for (int s = 0; s < g.vertex_count(); ++s) {
    if (!cs.count(c[s]) || comp[static_cast<std::size_t>(s)] >= 0) continue;
    KempeChain k{colors, {}};
    std::deque<int> q{s};
    comp[static_cast<std::size_t>(s)] = static_cast<int>(out.size());
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      k.vertices.push_back(x);
      for (int y : g.neighbors(x))
        if (cs.count(c[y]) && comp[static_cast<std::size_t>(y)] < 0) {
          comp[static_cast<std::size_t>(y)] = comp[static_cast<std::size_t>(s)];
          q.push_back(y);
        }
    }
    std::sort(k.vertices.begin(), k.vertices.end());
    out.push_back(std::move(k));
  }
  return out;
}

class SwapFailure : public Error {
 public:
  // condition 1..3 as in the definition of a generalized swap; 4 = properness
  SwapFailure(int condition, const std::string& msg)
      : Error(ErrorKind::SwapInvalid, "condition " + std::to_string(condition) + ": " + msg), condition_(condition) {}
  int condition() const { return condition_; }

 private:
  int condition_;
};

inline bool is_chain_of(const Graph& g, const Coloring& c, const KempeChain& chain) {
  for (const auto& k : kempe_chains(g, c, chain.colors))
    if (k.vertices == chain.vertices) return true;
  return false;
}

// Vertices absent from new_assignment keep their color.
inline Coloring apply_generalized_swap(const Graph& g, const Coloring& c, const KempeChain& chain,
                                       const std::map<int, int>& new_assignment) {
  if (!is_proper(g, c)) throw Error(ErrorKind::ImproperColoring, "swap needs a proper coloring");
  KempeChain sorted = chain;
  std::sort(sorted.vertices.begin(), sorted.vertices.end());
  if (!is_chain_of(g, c, sorted)) throw Error(ErrorKind::BadColorSet, "vertex set is not a Kempe chain for those colors");
  std::set<int> in(sorted.vertices.begin(), sorted.vertices.end());
  Coloring out = c;
  for (auto [v, col] : new_assignment) {
    if (v < 0 || v >= g.vertex_count()) throw Error(ErrorKind::BadParameter, "vertex out of range");
    if (col < 0 || col >= c.palette_size) throw Error(ErrorKind::BadParameter, "color outside the palette");
    out.assignment[static_cast<std::size_t>(v)] = col;
  }
  for (int v = 0; v < g.vertex_count(); ++v)
    if (!in.count(v) && out[v] != c[v]) throw SwapFailure(1, "vertex " + g.vertex_name(v) + " outside the chain changed");
  for (int v : sorted.vertices)
    if (out[v] == c[v]) throw SwapFailure(2, "chain vertex " + g.vertex_name(v) + " kept its color");
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto& ed = g.edge(e);
    if (!in.count(ed.u) || !in.count(ed.v)) continue;
    if (out[ed.u] != c[ed.v] && out[ed.v] != c[ed.u])
      throw SwapFailure(3, "edge " + g.edge_name(e) + " inherits neither endpoint color");
  }
  if (!is_proper(g, out)) throw SwapFailure(4, "result is not proper");
  return out;
}

// ------------------------------------------------- feasible 0/1 circuit steps

struct SwapStep {
  Coloring target;
  IntVector direction;  // X(target) - X(source)
  KempeChain chain;     // smallest generalized chain containing the changed vertices
  bool swap_valid;      // the step is literally a generalized Kempe swap on some chain
};

struct StepOptions {
  std::size_t subset_cap = 8;
};

inline std::vector<int> mask_vertices(std::uint64_t mask) {
  std::vector<int> vs;
  for (int v = 0; mask >> v; ++v)
    if ((mask >> v) & 1) vs.push_back(v);
  return vs;
}

// Smallest generalized chain containing the changed set: colors are the old
// and new colors of the changed vertices.
inline KempeChain induced_chain(const Graph& g, const Coloring& c, const Coloring& d, const std::vector<int>& changed) {
  std::set<int> cols;
  for (int v : changed) {
    cols.insert(c[v]);
    cols.insert(d[v]);
  }
  KempeChain k{{cols.begin(), cols.end()}, {}};
  for (const auto& ch : kempe_chains(g, c, k.colors))
    if (std::binary_search(ch.vertices.begin(), ch.vertices.end(), changed.front())) k.vertices = ch.vertices;
  return k;
}

inline bool literal_swap(const Graph& g, const Coloring& c, const Coloring& d, const KempeChain& k) {
  std::map<int, int> na;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (c[v] != d[v]) na[v] = d[v];
  try {
    return apply_generalized_swap(g, c, k, na) == d;
  } catch (const Error&) {
    return false;
  }
}

// Every proper coloring one circuit step (of maximal length 1) away from c.
// The changed vertices of such a step form a connected set W, and every vertex
// of W changes color, so enumerating connected W and their recolorings is
// complete up to the subset cap.
inline std::vector<SwapStep> feasible_01_circuits_at(const Graph& g, const Coloring& c, const StepOptions& opt = {}) {
  if (!is_proper(g, c)) throw Error(ErrorKind::ImproperColoring, "source coloring must be proper");
  const int n = g.vertex_count();
  if (n > 24) throw Error(ErrorKind::CapExceeded, "too many vertices for subset enumeration");
  for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << n); ++mask)
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) > opt.subset_cap && vertex_set_connected(g, mask))
      throw Error(ErrorKind::CapExceeded, "connected vertex sets exceed the subset cap of " + std::to_string(opt.subset_cap));
  const int t = c.palette_size;
  std::vector<SwapStep> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << n); ++mask) {
    if (!vertex_set_connected(g, mask)) continue;
    const auto W = mask_vertices(mask);
    std::vector<int> pick(W.size(), 0);
    // odometer over colors different from the current one
    while (true) {
      Coloring d = c;
      for (std::size_t j = 0; j < W.size(); ++j) {
        int col = pick[j] >= c[W[j]] ? pick[j] + 1 : pick[j];
        d.assignment[static_cast<std::size_t>(W[j])] = col;
      }
      if (is_proper(g, d) && difference_is_circuit(g, c, d).is_circuit) {
        KempeChain k = induced_chain(g, c, d, W);
        out.push_back({d, difference(c, d), k, literal_swap(g, c, d, k)});
      }
      std::size_t j = 0;
      while (j < W.size() && ++pick[j] == t - 1) pick[j++] = 0;
      if (j == W.size()) break;
    }
  }
  std::sort(out.begin(), out.end(), [](const SwapStep& a, const SwapStep& b) { return a.target < b.target; });
  return out;
}

// One-step trace between two proper colorings along their difference.
inline WalkTrace step_trace(const Coloring& from, const Coloring& to) {
  WalkTrace t;
  t.points = {char_vector(from), char_vector(to)};
  t.circuits_used = {difference(from, to)};
  t.step_lengths = {1};
  return t;
}

inline WalkTrace chain_trace(const std::vector<Coloring>& path) {
  WalkTrace t;
  t.points.push_back(char_vector(path.front()));
  for (std::size_t i = 1; i < path.size(); ++i) {
    t.points.push_back(char_vector(path[i]));
    t.circuits_used.push_back(difference(path[i - 1], path[i]));
    t.step_lengths.push_back(1);
  }
  return t;
}

// --------------------------------------------------------------- proper walks

struct ProperWalk {
  std::vector<Coloring> colorings;  // c1 ... c2
  WalkTrace trace;
  std::size_t length() const { return colorings.size() - 1; }
};

inline ProperWalk proper_walk_bfs(const Graph& g, int palette_size, const Coloring& c1, const Coloring& c2,
                                  const StepOptions& opt = {}) {
  if (c1.palette_size != palette_size || c2.palette_size != palette_size)
    throw Error(ErrorKind::BadParameter, "palette size mismatch");
  if (!is_proper(g, c1) || !is_proper(g, c2)) throw Error(ErrorKind::ImproperColoring, "endpoints must be proper");
  std::map<Coloring, Coloring> parent{{c1, c1}};
  std::deque<Coloring> q{c1};
  while (!q.empty() && !parent.count(c2)) {
    Coloring cur = q.front();
    q.pop_front();
    for (auto& st : feasible_01_circuits_at(g, cur, opt))
      if (parent.emplace(st.target, cur).second) q.push_back(st.target);
  }
  if (!parent.count(c2)) throw Error(ErrorKind::Unreachable, "no proper walk between the colorings");
  std::vector<Coloring> path{c2};
  while (!(path.back() == c1)) path.push_back(parent.at(path.back()));
  std::reverse(path.begin(), path.end());
  return {path, chain_trace(path)};
}

// K_n with n colors: at most two steps, via one rotation along all cycles of
// the color-exchange digraph followed by a fix-up.
inline ProperWalk two_step_construction(const Graph& g, const Coloring& c1, const Coloring& c2) {
  const int n = g.vertex_count();
  if (!g.is_complete() || c1.palette_size != n || c2.palette_size != n)
    throw Error(ErrorKind::BadInstance, "needs K_n with exactly n colors");
  if (!is_proper(g, c1) || !is_proper(g, c2)) throw Error(ErrorKind::ImproperColoring, "colorings must be proper");
  if (c1 == c2) return {{c1}, chain_trace({c1})};
  if (difference_is_circuit(g, c1, c2).is_circuit) return {{c1, c2}, step_trace(c1, c2)};

  // next(v) is the vertex whose new color is v's old color.
  std::vector<int> owner_new(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) owner_new[static_cast<std::size_t>(c2[v])] = v;
  std::vector<int> order;
  std::vector<char> done(static_cast<std::size_t>(n), 0);
  for (int v = 0; v < n; ++v) {
    if (done[static_cast<std::size_t>(v)] || c1[v] == c2[v]) continue;
    for (int x = v; !done[static_cast<std::size_t>(x)]; x = owner_new[static_cast<std::size_t>(c1[x])]) {
      done[static_cast<std::size_t>(x)] = 1;
      order.push_back(x);
    }
  }
  Coloring mid = c1;
  for (std::size_t k = 0; k < order.size(); ++k) {
    int prev = order[(k + order.size() - 1) % order.size()];
    mid.assignment[static_cast<std::size_t>(order[k])] = c1[prev];
  }
  std::vector<Coloring> path{c1, mid, c2};
  if (!difference_is_circuit(g, c1, mid).is_circuit || !difference_is_circuit(g, mid, c2).is_circuit)
    throw Error(ErrorKind::BadInstance, "rotation did not produce circuit steps");
  return {path, chain_trace(path)};
}

// ----------------------------------------------------- reconfiguration graphs

inline std::vector<Coloring> proper_colorings(const Graph& g, int palette_size) {
  const int n = g.vertex_count();
  std::vector<Coloring> out;
  Coloring c{std::vector<int>(static_cast<std::size_t>(n), 0), palette_size};
  std::function<void(int)> rec = [&](int v) {
    if (v == n) {
      out.push_back(c);
      return;
    }
    for (int col = 0; col < palette_size; ++col) {
      bool ok = true;
      for (int u : g.neighbors(v))
        if (u < v && c[u] == col) ok = false;
      if (!ok) continue;
      c.assignment[static_cast<std::size_t>(v)] = col;
      rec(v + 1);
    }
  };
  if (palette_size > 0) rec(0);
  return out;
}

enum class Adjacency { Circuit, KempeTwoColor };

struct ReconfigurationGraph {
  std::vector<Coloring> nodes;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::size_t components = 0;
  bool connected() const { return components <= 1; }
};

// Colorings reachable by one ordinary (two-color) Kempe swap.
inline std::set<Coloring> kempe_neighbors(const Graph& g, const Coloring& c) {
  std::set<Coloring> out;
  for (int a = 0; a < c.palette_size; ++a)
    for (int b = a + 1; b < c.palette_size; ++b)
      for (const auto& ch : kempe_chains(g, c, {a, b})) {
        Coloring d = c;
        for (int v : ch.vertices) d.assignment[static_cast<std::size_t>(v)] = c[v] == a ? b : a;
        out.insert(d);
      }
  return out;
}

inline ReconfigurationGraph reconfiguration_graph(const Graph& g, int palette_size, Adjacency adj) {
  if (g.vertex_count() > 10) throw Error(ErrorKind::CapExceeded, "reconfiguration graphs are built for <= 10 vertices");
  ReconfigurationGraph r;
  r.nodes = proper_colorings(g, palette_size);
  std::map<Coloring, std::size_t> id;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) id[r.nodes[i]] = i;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    if (adj == Adjacency::Circuit) {
      for (std::size_t j = i + 1; j < r.nodes.size(); ++j)
        if (difference_is_circuit(g, r.nodes[i], r.nodes[j]).is_circuit) r.edges.push_back({i, j});
    } else {
      for (const auto& d : kempe_neighbors(g, r.nodes[i])) {
        std::size_t j = id.at(d);
        if (j > i) r.edges.push_back({i, j});
      }
    }
  }
  std::vector<std::size_t> parent(r.nodes.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (auto [a, b] : r.edges) parent[find(a)] = find(b);
  for (std::size_t i = 0; i < r.nodes.size(); ++i) r.components += find(i) == i;
  return r;
}

namespace detail {
inline int chromatic_number(const Graph& g) {
  for (int t = 1; t <= g.vertex_count(); ++t)
    if (!proper_colorings(g, t).empty()) return t;
  return 0;
}
}  // namespace detail

}  // namespace circuitkit::coloring
