#pragma once
// JSON and text formats. Rationals always print as "p/q" (including "4/1")
// so every number in a report has one spelling.

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "circuitkit/circuits.hpp"
#include "circuitkit/coloring.hpp"
#include "circuitkit/forest.hpp"
#include "circuitkit/graph.hpp"

namespace circuitkit::io {

using Json = nlohmann::ordered_json;

inline std::string rat(const Rational& q) { return q.get_num().get_str() + "/" + q.get_den().get_str(); }

inline Rational rat_from(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
  throw Error(ErrorKind::BadParameter, "expected a rational string or integer, got " + j.dump());
}

inline Json rat_vector(std::span<const Rational> v) {
  Json a = Json::array();
  for (const auto& q : v) a.push_back(rat(q));
  return a;
}

// Integers that fit in 64 bits print as numbers, larger ones as strings.
inline Json integer(const Integer& z) {
  if (z.fits_slong_p()) return static_cast<long long>(z.get_si());
  return z.get_str();
}

inline Json int_vector(const IntVector& v) {
  Json a = Json::array();
  for (const auto& z : v) a.push_back(integer(z));
  return a;
}

inline IntVector int_vector_from(const Json& j) {
  IntVector v;
  for (const auto& x : j) {
    if (x.is_number_integer()) v.emplace_back(static_cast<long>(x.get<long long>()));
    else if (x.is_string()) v.emplace_back(x.get<std::string>(), 10);
    else throw Error(ErrorKind::BadParameter, "expected an integer, got " + x.dump());
  }
  return v;
}

inline RatVector rat_vector_from(const Json& j) {
  RatVector v;
  for (const auto& x : j) v.push_back(rat_from(x));
  return v;
}

// ------------------------------------------------------------- systems

inline Json to_json(const ConstraintSystem& s) {
  Json j;
  j["n"] = s.n();
  j["variables"] = s.variable_labels;
  j["equalities"] = Json::array();
  for (std::size_t i = 0; i < s.m_A(); ++i)
    j["equalities"].push_back({{"coeffs", rat_vector(s.A.row(i))}, {"rhs", rat(s.b[i])}, {"label", s.row_labels[i]}});
  j["inequalities"] = Json::array();
  for (std::size_t i = 0; i < s.m_B(); ++i)
    j["inequalities"].push_back({{"coeffs", rat_vector(s.B.row(i))}, {"rhs", rat(s.d[i])}, {"label", s.inequality_label(i)}});
  return j;
}

inline ConstraintSystem system_from_json(const Json& j) {
  try {
    const std::size_t n = j.at("n").get<std::size_t>();
    ConstraintSystem s(n);
    if (j.contains("variables")) {
      s.variable_labels = j["variables"].get<std::vector<std::string>>();
      if (s.variable_labels.size() != n) throw Error(ErrorKind::DimensionMismatch, "variables length differs from n");
    }
    auto rows = [&](const char* key, bool eq) {
      if (!j.contains(key)) return;
      for (const auto& r : j[key]) {
        RatVector c = rat_vector_from(r.at("coeffs"));
        if (c.size() != n) throw Error(ErrorKind::DimensionMismatch, std::string(key) + " row length differs from n");
        std::string label = r.contains("label") ? r["label"].get<std::string>() : std::string{};
        if (eq) s.add_equality(c, rat_from(r.at("rhs")), label);
        else s.add_inequality(c, rat_from(r.at("rhs")), label);
      }
    };
    rows("equalities", true);
    rows("inequalities", false);
    s.validate();
    return s;
  } catch (const Json::exception& e) {
    throw ParseFailure(ErrorKind::ParseError, 0, e.what());
  }
}

inline Json to_json(const std::vector<Circuit>& cs) {
  Json a = Json::array();
  for (const auto& c : cs) a.push_back(int_vector(c.vector));
  return a;
}

inline Json to_json(const WalkTrace& t) {
  Json j;
  j["points"] = Json::array();
  for (const auto& p : t.points) j["points"].push_back(rat_vector(p));
  j["circuits"] = Json::array();
  for (const auto& g : t.circuits_used) j["circuits"].push_back(int_vector(g));
  j["steps"] = rat_vector(t.step_lengths);
  return j;
}

inline WalkTrace trace_from_json(const Json& j) {
  WalkTrace t;
  for (const auto& p : j.at("points")) t.points.push_back(rat_vector_from(p));
  for (const auto& g : j.at("circuits")) t.circuits_used.push_back(int_vector_from(g));
  t.step_lengths = rat_vector_from(j.at("steps"));
  return t;
}

// -------------------------------------------------------------- graphs

inline Json to_json(const Graph& g) {
  Json j;
  j["n"] = g.vertex_count();
  j["edges"] = Json::array();
  for (const auto& e : g.edges()) j["edges"].push_back({e.u, e.v});
  return j;
}

namespace detail {

inline void add_checked(Graph& g, long long u, long long v, int line) {
  if (u < 0 || v < 0) throw ParseFailure(ErrorKind::ParseError, line, "vertices must be nonnegative integers");
  while (g.vertex_count() <= std::max(u, v)) g.add_vertex();
  if (u == v) throw ParseFailure(ErrorKind::LoopEdge, line, "loop at vertex " + std::to_string(u));
  if (g.edge_id(static_cast<int>(u), static_cast<int>(v)))
    throw ParseFailure(ErrorKind::DuplicateEdge, line, "repeated edge " + std::to_string(u) + " " + std::to_string(v));
  g.add_edge(static_cast<int>(u), static_cast<int>(v));
}

}  // namespace detail

inline Graph graph_from_json(const Json& j) {
  Graph g;
  try {
    const int n = j.at("n").get<int>();
    if (n < 0) throw ParseFailure(ErrorKind::ParseError, 0, "negative vertex count");
    for (int i = 0; i < n; ++i) g.add_vertex();
    int idx = 0;
    for (const auto& e : j.at("edges")) {
      ++idx;
      const auto u = e.at(0).get<long long>(), v = e.at(1).get<long long>();
      if (u >= n || v >= n) throw ParseFailure(ErrorKind::ParseError, 0, "edge " + std::to_string(idx) + " names a vertex >= n");
      detail::add_checked(g, u, v, 0);
    }
  } catch (const Json::exception& e) {
    throw ParseFailure(ErrorKind::ParseError, 0, e.what());
  }
  return g;
}

// "u v" per line, '#' starts a comment.
inline Graph graph_from_text(const std::string& text) {
  Graph g;
  std::istringstream in(text);
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string a, b, extra;
    if (!(ls >> a)) continue;
    if (!(ls >> b) || (ls >> extra)) throw ParseFailure(ErrorKind::ParseError, no, "expected two vertex ids");
    auto num = [&](const std::string& s) {
      if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }) || s.size() > 9)
        throw ParseFailure(ErrorKind::ParseError, no, "not a nonnegative integer: '" + s + "'");
      return std::stoll(s);
    };
    detail::add_checked(g, num(a), num(b), no);
  }
  return g;
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::BadParameter, "cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // nlohmann reports a byte offset; convert it to a line number
    const std::size_t upto = std::min(text.size(), e.byte);
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
    throw ParseFailure(ErrorKind::ParseError, line, e.what());
  }
}

inline Graph graph_from_string(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return graph_from_json(parse_json_text(text));
  return graph_from_text(text);
}

inline Graph ingest_graph(const std::string& path) { return graph_from_string(read_file(path)); }

// ----------------------------------------------------------- colorings

inline Json to_json(const Graph& g, const coloring::Coloring& c) {
  Json j;
  j["palette"] = Json::array();
  for (int a = 0; a < c.palette_size; ++a) j["palette"].push_back(a);
  j["assignment"] = Json::object();
  for (std::size_t v = 0; v < c.assignment.size(); ++v) j["assignment"][g.vertex_name(static_cast<int>(v))] = c.assignment[v];
  return j;
}

// Palette entries may be any distinct integers; they are mapped to 0..k-1 in
// the listed order.
inline coloring::Coloring coloring_from_json(const Graph& g, const Json& j) {
  try {
    std::map<long long, int> pos;
    for (const auto& p : j.at("palette")) {
      const auto id = p.get<long long>();
      if (pos.count(id)) throw Error(ErrorKind::BadParameter, "repeated palette color");
      pos[id] = static_cast<int>(pos.size());
    }
    coloring::Coloring c{std::vector<int>(static_cast<std::size_t>(g.vertex_count()), -1), static_cast<int>(pos.size())};
    for (auto it = j.at("assignment").begin(); it != j.at("assignment").end(); ++it) {
      auto v = g.vertex_by_name(it.key());
      if (!v) throw Error(ErrorKind::BadParameter, "unknown vertex " + it.key());
      auto p = pos.find(it.value().get<long long>());
      if (p == pos.end()) throw Error(ErrorKind::BadParameter, "color outside the palette at vertex " + it.key());
      c.assignment[static_cast<std::size_t>(*v)] = p->second;
    }
    if (std::count(c.assignment.begin(), c.assignment.end(), -1))
      throw Error(ErrorKind::BadParameter, "coloring leaves a vertex uncolored");
    return c;
  } catch (const Json::exception& e) {
    throw ParseFailure(ErrorKind::ParseError, 0, e.what());
  }
}

// ------------------------------------------------------- signed vectors

inline Json to_json_signed(const Graph& g, const forest::SignedEdgeVector& x) {
  Json j;
  j["edges"] = Json::object();
  for (int e = 0; e < g.edge_count(); ++e) j["edges"][std::to_string(e)] = integer(x[static_cast<std::size_t>(e)]);
  return j;
}

// Keys are edge ids, or "u-v" endpoint pairs.
inline forest::SignedEdgeVector signed_from_json(const Graph& g, const Json& j) {
  forest::SignedEdgeVector x(static_cast<std::size_t>(g.edge_count()), 0);
  try {
    for (auto it = j.at("edges").begin(); it != j.at("edges").end(); ++it) {
      const std::string& k = it.key();
      int e = -1;
      if (auto dash = k.find('-'); dash != std::string::npos) {
        e = g.edge_between(k.substr(0, dash), k.substr(dash + 1));
      } else {
        if (k.empty() || !std::all_of(k.begin(), k.end(), [](char c) { return c >= '0' && c <= '9'; }))
          throw Error(ErrorKind::BadParameter, "bad edge key " + k);
        e = std::stoi(k);
        if (e >= g.edge_count()) throw Error(ErrorKind::BadParameter, "edge id out of range: " + k);
      }
      const auto v = it.value().get<long long>();
      if (v < -1 || v > 1) throw Error(ErrorKind::BadParameter, "edge values must be -1, 0 or 1");
      x[static_cast<std::size_t>(e)] = static_cast<long>(v);
    }
  } catch (const Json::exception& e) {
    throw ParseFailure(ErrorKind::ParseError, 0, e.what());
  }
  return x;
}

inline std::vector<int> edge_list_from_json(const Graph& g, const Json& j) {
  std::vector<int> F;
  for (const auto& e : j) {
    int id = -1;
    if (e.is_number_integer()) id = e.get<int>();
    else if (e.is_array() && e.size() == 2) {
      auto found = g.edge_id(e[0].get<int>(), e[1].get<int>());
      if (!found) throw Error(ErrorKind::BadParameter, "no edge " + e.dump());
      id = *found;
    } else throw Error(ErrorKind::BadParameter, "edge must be an id or [u,v]: " + e.dump());
    if (id < 0 || id >= g.edge_count()) throw Error(ErrorKind::BadParameter, "edge id out of range");
    F.push_back(id);
  }
  return F;
}

// ---------------------------------------------------------------- CSV

inline std::string csv_cell(const Json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return s;
}

// Scalar fields only; nested objects flatten with dotted keys, arrays are skipped.
inline void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, Json>>& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) flatten(*it, key, out);
    else if (!it->is_array()) out.push_back({key, *it});
  }
}

inline std::string to_csv(const std::vector<Json>& rows) {
  std::vector<std::string> header;
  std::vector<std::map<std::string, Json>> flat;
  for (const auto& r : rows) {
    std::vector<std::pair<std::string, Json>> f;
    flatten(r, "", f);
    std::map<std::string, Json> m;
    for (auto& [k, v] : f) {
      if (std::find(header.begin(), header.end(), k) == header.end()) header.push_back(k);
      m[k] = v;
    }
    flat.push_back(std::move(m));
  }
  std::string s;
  for (std::size_t i = 0; i < header.size(); ++i) s += (i ? "," : "") + csv_cell(header[i]);
  s += "\n";
  for (const auto& m : flat) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) s += ",";
      if (auto it = m.find(header[i]); it != m.end()) s += csv_cell(it->second);
    }
    s += "\n";
  }
  return s;
}

}  // namespace circuitkit::io
