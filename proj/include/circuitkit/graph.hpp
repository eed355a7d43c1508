#pragma once
// Simple undirected graphs with stable vertex and edge ids.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "circuitkit/error.hpp"

namespace circuitkit {

struct Edge {
  int u, v;
  int other(int w) const { return w == u ? v : u; }
  bool touches(int w) const { return u == w || v == w; }
};

class Graph {
 public:
  Graph() = default;
  explicit Graph(int n) : adj_(static_cast<std::size_t>(n)), vnames_(static_cast<std::size_t>(n)) {}

  int vertex_count() const { return static_cast<int>(adj_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_.at(static_cast<std::size_t>(e)); }
  const std::vector<int>& incident(int v) const { return adj_.at(static_cast<std::size_t>(v)); }
  int degree(int v) const { return static_cast<int>(incident(v).size()); }

  int add_vertex(std::string name = {}) {
    adj_.emplace_back();
    vnames_.push_back(std::move(name));
    return vertex_count() - 1;
  }

  int add_edge(int u, int v, std::string name = {}) {
    if (u < 0 || v < 0 || u >= vertex_count() || v >= vertex_count())
      throw Error(ErrorKind::BadParameter, "edge endpoint out of range");
    if (u == v) throw Error(ErrorKind::LoopEdge, "loop at vertex " + std::to_string(u));
    if (edge_id(u, v)) throw Error(ErrorKind::DuplicateEdge, "repeated edge " + std::to_string(u) + "-" + std::to_string(v));
    edges_.push_back({u, v});
    enames_.push_back(std::move(name));
    const int id = edge_count() - 1;
    adj_[static_cast<std::size_t>(u)].push_back(id);
    adj_[static_cast<std::size_t>(v)].push_back(id);
    return id;
  }

  std::optional<int> edge_id(int u, int v) const {
    if (u < 0 || u >= vertex_count()) return std::nullopt;
    for (int e : incident(u))
      if (edges_[static_cast<std::size_t>(e)].other(u) == v) return e;
    return std::nullopt;
  }

  std::string vertex_name(int v) const {
    const auto& s = vnames_.at(static_cast<std::size_t>(v));
    return s.empty() ? std::to_string(v) : s;
  }
  std::string edge_name(int e) const {
    const auto& s = enames_.at(static_cast<std::size_t>(e));
    if (!s.empty()) return s;
    const Edge& ed = edge(e);
    return vertex_name(ed.u) + vertex_name(ed.v);
  }
  std::optional<int> vertex_by_name(const std::string& name) const {
    for (int v = 0; v < vertex_count(); ++v)
      if (vertex_name(v) == name) return v;
    return std::nullopt;
  }
  std::optional<int> edge_by_name(const std::string& name) const {
    for (int e = 0; e < edge_count(); ++e)
      if (edge_name(e) == name) return e;
    return std::nullopt;
  }
  // Accepts either orientation of the endpoint names.
  int edge_between(const std::string& a, const std::string& b) const {
    auto u = vertex_by_name(a), v = vertex_by_name(b);
    if (!u || !v) throw Error(ErrorKind::BadParameter, "unknown vertex " + a + " or " + b);
    auto e = edge_id(*u, *v);
    if (!e) throw Error(ErrorKind::BadParameter, "no edge " + a + b);
    return *e;
  }

  std::vector<int> neighbors(int v) const {
    std::vector<int> out;
    for (int e : incident(v)) out.push_back(edges_[static_cast<std::size_t>(e)].other(v));
    return out;
  }

  bool is_complete() const {
    const int n = vertex_count();
    return edge_count() == n * (n - 1) / 2;
  }

  // Edge ids with both endpoints in the vertex mask.
  std::vector<int> induced_edges(std::uint64_t mask) const {
    std::vector<int> out;
    for (int e = 0; e < edge_count(); ++e)
      if (((mask >> edges_[static_cast<std::size_t>(e)].u) & 1) && ((mask >> edges_[static_cast<std::size_t>(e)].v) & 1))
        out.push_back(e);
    return out;
  }

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<std::string> vnames_, enames_;
};

// ------------------------------------------------------------- generators

inline Graph complete_graph(int n) {
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
  return g;
}

inline Graph path_graph(int n) {
  Graph g(n);
  for (int v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
  return g;
}

inline Graph cycle_graph(int n) {
  Graph g = path_graph(n);
  g.add_edge(n - 1, 0);
  return g;
}

inline Graph star_graph(int leaves) {
  Graph g(leaves + 1);
  for (int v = 1; v <= leaves; ++v) g.add_edge(0, v);
  return g;
}

// Two triangles 0-1-2 and 3-4-5 joined by the matching i -- i+3.
inline Graph triangular_prism() {
  Graph g(6);
  for (auto [u, v] : std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {0, 3}, {1, 4}, {2, 5}})
    g.add_edge(u, v);
  return g;
}

inline Graph graph_from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  Graph g(n);
  for (auto [u, v] : edges) g.add_edge(u, v);
  return g;
}

// ---------------------------------------------------- edge-set utilities

// Connected components of the graph formed by an edge subset (touched vertices only).
inline std::vector<std::vector<int>> edge_components(const Graph& g, const std::vector<int>& es) {
  const int n = g.vertex_count();
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  for (int e : es) parent[static_cast<std::size_t>(find(g.edge(e).u))] = find(g.edge(e).v);
  std::map<int, std::vector<int>> comps;
  for (int e : es) comps[find(g.edge(e).u)].push_back(e);
  std::vector<std::vector<int>> out;
  for (auto& [root, part] : comps) {
    std::sort(part.begin(), part.end());
    out.push_back(std::move(part));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool edges_connected(const Graph& g, const std::vector<int>& es) {
  return !es.empty() && edge_components(g, es).size() == 1;
}

inline std::vector<int> edge_set_vertices(const Graph& g, const std::vector<int>& es) {
  std::set<int> vs;
  for (int e : es) {
    vs.insert(g.edge(e).u);
    vs.insert(g.edge(e).v);
  }
  return {vs.begin(), vs.end()};
}

// Graph diameter of the subgraph formed by the edges (and their endpoints);
// nullopt when it is disconnected or empty.
inline std::optional<int> edge_set_diameter(const Graph& g, const std::vector<int>& es) {
  if (es.empty()) return std::nullopt;
  const auto vs = edge_set_vertices(g, es);
  std::map<int, std::vector<int>> adj;
  for (int e : es) {
    adj[g.edge(e).u].push_back(g.edge(e).v);
    adj[g.edge(e).v].push_back(g.edge(e).u);
  }
  int diam = 0;
  for (int s : vs) {
    std::map<int, int> dist{{s, 0}};
    std::deque<int> q{s};
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      for (int y : adj[x])
        if (!dist.count(y)) {
          dist[y] = dist[x] + 1;
          q.push_back(y);
        }
    }
    if (dist.size() != vs.size()) return std::nullopt;
    for (auto& [v, dv] : dist) diam = std::max(diam, dv);
  }
  return diam;
}

inline bool is_forest(const Graph& g, const std::vector<int>& es) {
  std::vector<int> parent(static_cast<std::size_t>(g.vertex_count()));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  std::set<int> seen;
  for (int e : es) {
    if (e < 0 || e >= g.edge_count() || !seen.insert(e).second) return false;
    int a = find(g.edge(e).u), b = find(g.edge(e).v);
    if (a == b) return false;
    parent[static_cast<std::size_t>(a)] = b;
  }
  return true;
}

inline bool is_connected_graph(const Graph& g) {
  if (g.vertex_count() <= 1) return true;
  std::vector<int> all(static_cast<std::size_t>(g.edge_count()));
  std::iota(all.begin(), all.end(), 0);
  return edges_connected(g, all) && static_cast<int>(edge_set_vertices(g, all).size()) == g.vertex_count();
}

// Vertex subset (bitmask) connectivity inside g.
inline bool vertex_set_connected(const Graph& g, std::uint64_t mask) {
  if (mask == 0) return false;
  int s = __builtin_ctzll(mask);
  std::uint64_t seen = std::uint64_t(1) << s;
  std::deque<int> q{s};
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    for (int y : g.neighbors(x))
      if (((mask >> y) & 1) && !((seen >> y) & 1)) {
        seen |= std::uint64_t(1) << y;
        q.push_back(y);
      }
  }
  return seen == mask;
}

// ------------------------------------------------ small-graph catalogues

// All graphs on n vertices (n <= 7), one per isomorphism class, as edge lists
// over the vertex set {0..n-1}. Optionally connected only.
inline std::vector<Graph> graphs_up_to_isomorphism(int n, bool connected_only) {
  std::vector<std::pair<int, int>> slots;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) slots.push_back({u, v});
  const int m = static_cast<int>(slots.size());
  auto slot_of = [&](int u, int v) {
    if (u > v) std::swap(u, v);
    return u * n - u * (u + 1) / 2 + (v - u - 1);
  };
  std::vector<std::vector<int>> perm_maps;
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  do {
    std::vector<int> mp(static_cast<std::size_t>(m));
    for (int s = 0; s < m; ++s) mp[static_cast<std::size_t>(s)] = slot_of(p[static_cast<std::size_t>(slots[static_cast<std::size_t>(s)].first)], p[static_cast<std::size_t>(slots[static_cast<std::size_t>(s)].second)]);
    perm_maps.push_back(std::move(mp));
  } while (std::next_permutation(p.begin(), p.end()));

  std::set<std::uint32_t> canon;
  for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << m); ++mask) {
    std::uint32_t best = mask;
    for (const auto& mp : perm_maps) {
      std::uint32_t img = 0;
      for (int s = 0; s < m; ++s)
        if ((mask >> s) & 1) img |= std::uint32_t(1) << mp[static_cast<std::size_t>(s)];
      best = std::min(best, img);
      if (best < mask) break;
    }
    if (best == mask) canon.insert(mask);
  }
  std::vector<Graph> out;
  for (auto mask : canon) {
    Graph g(n);
    for (int s = 0; s < m; ++s)
      if ((mask >> s) & 1) g.add_edge(slots[static_cast<std::size_t>(s)].first, slots[static_cast<std::size_t>(s)].second);
    if (!connected_only || is_connected_graph(g)) out.push_back(std::move(g));
  }
  return out;
}

}  // namespace circuitkit
