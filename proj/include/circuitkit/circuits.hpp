#pragma once
// Circuits of {x : Ax = b, Bx <= d}: decision oracle, imbalance, feasibility,
// maximal steps and circuit walks.
//
// Circuit test. Let B0 be the rows of B with (Bg)_i = 0. Every y in
// ker([A; B0]) has supp(By) contained in supp(Bg). If that kernel is the line
// through g, nothing of smaller B-support exists and g is a circuit. If it has
// dimension >= 2, adding any row i of supp(Bg) still leaves a nonzero y, and
// supp(By) misses i. So g is a circuit iff A g = 0 and dim ker([A; B0]) = 1.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "circuitkit/error.hpp"
#include "circuitkit/ratmat.hpp"

namespace circuitkit {

struct ConstraintSystem {
  RatMatrix A;
  RatVector b;
  RatMatrix B;
  RatVector d;
  std::vector<std::string> variable_labels;
  std::vector<std::string> row_labels;  // equalities first, then inequalities

  ConstraintSystem() = default;
  explicit ConstraintSystem(std::size_t n) : A(0, n), B(0, n) {
    for (std::size_t j = 0; j < n; ++j) variable_labels.push_back("x" + std::to_string(j));
  }

  std::size_t n() const { return A.cols(); }
  std::size_t m_A() const { return A.rows(); }
  std::size_t m_B() const { return B.rows(); }

  void add_equality(std::span<const Rational> coeffs, const Rational& rhs, std::string label = {}) {
    if (label.empty()) label = "eq" + std::to_string(A.rows());
    A.append_row(coeffs);
    b.push_back(rhs);
    row_labels.insert(row_labels.begin() + static_cast<std::ptrdiff_t>(A.rows() - 1), std::move(label));
  }
  void add_inequality(std::span<const Rational> coeffs, const Rational& rhs, std::string label = {}) {
    if (label.empty()) label = "ineq" + std::to_string(B.rows());
    B.append_row(coeffs);
    d.push_back(rhs);
    row_labels.push_back(std::move(label));
  }
  const std::string& inequality_label(std::size_t i) const { return row_labels[A.rows() + i]; }

  void validate() const {
    if (A.cols() != B.cols()) throw Error(ErrorKind::DimensionMismatch, "A and B column counts differ");
    if (b.size() != A.rows() || d.size() != B.rows())
      throw Error(ErrorKind::DimensionMismatch, "right-hand side length mismatch");
    if (variable_labels.size() != n() || row_labels.size() != A.rows() + B.rows())
      throw Error(ErrorKind::DimensionMismatch, "label count mismatch");
  }
};

struct Circuit {
  IntVector vector;
  std::vector<std::size_t> zero_rows_of_B;

  bool operator==(const Circuit& o) const { return vector == o.vector; }
  bool operator<(const Circuit& o) const { return vector < o.vector; }
};

inline std::vector<std::size_t> zero_rows(const ConstraintSystem& sys, std::span<const Rational> g) {
  RatVector bg = multiply(sys.B, g);
  std::vector<std::size_t> z;
  for (std::size_t i = 0; i < bg.size(); ++i)
    if (bg[i] == 0) z.push_back(i);
  return z;
}

inline std::vector<std::size_t> b_support(const ConstraintSystem& sys, std::span<const Rational> g) {
  RatVector bg = multiply(sys.B, g);
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < bg.size(); ++i)
    if (bg[i] != 0) s.push_back(i);
  return s;
}

// Canonical stored form of a circuit direction.
inline Circuit make_circuit(const ConstraintSystem& sys, std::span<const Rational> g) {
  Circuit c;
  c.vector = canonical_sign(normalize_coprime(g));
  c.zero_rows_of_B = zero_rows(sys, to_rational(c.vector));
  return c;
}

struct CircuitDecision {
  enum class Verdict { Circuit, NotCircuit, NotInKernel };
  Verdict verdict;
  RatVector witness;  // set for NotCircuit

  bool is_circuit() const { return verdict == Verdict::Circuit; }
};

inline const char* to_string(CircuitDecision::Verdict v) {
  switch (v) {
    case CircuitDecision::Verdict::Circuit: return "Circuit";
    case CircuitDecision::Verdict::NotCircuit: return "NotCircuit";
    case CircuitDecision::Verdict::NotInKernel: return "NotInKernel";
  }
  return "?";
}

inline CircuitDecision is_circuit(const ConstraintSystem& sys, std::span<const Rational> g) {
  if (g.size() != sys.n()) throw Error(ErrorKind::DimensionMismatch, "vector length differs from n");
  if (is_zero(g)) throw Error(ErrorKind::ZeroVector, "the zero vector is never a circuit");
  if (!is_zero(multiply(sys.A, g))) return {CircuitDecision::Verdict::NotInKernel, {}};

  RatVector bg = multiply(sys.B, g);
  EchelonBasis e(sys.n());
  for (std::size_t r = 0; r < sys.m_A(); ++r) e.insert(sys.A.row(r));
  for (std::size_t r = 0; r < sys.m_B(); ++r)
    if (bg[r] == 0) e.insert(sys.B.row(r));
  if (e.rank() + 1 == sys.n()) return {CircuitDecision::Verdict::Circuit, {}};

  for (std::size_t r = 0; r < sys.m_B(); ++r) {
    if (bg[r] == 0) continue;
    e.insert(sys.B.row(r));
    return {CircuitDecision::Verdict::NotCircuit, e.kernel().front()};
  }
  // Bg = 0 with a kernel of dimension >= 2: any independent kernel vector is a
  // witness of equal (empty) B-support.
  for (auto& y : e.kernel()) {
    EchelonBasis t(sys.n());
    t.insert(g);
    if (t.insert(y)) return {CircuitDecision::Verdict::NotCircuit, y};
  }
  return {CircuitDecision::Verdict::NotCircuit, e.kernel().front()};
}

inline CircuitDecision is_circuit(const ConstraintSystem& sys, const IntVector& g) {
  return is_circuit(sys, to_rational(g));
}

// ---------------------------------------------------------------- imbalance

struct ImbalanceReport {
  Rational kappa;
  Circuit witness_circuit;
  std::pair<std::size_t, std::size_t> witness_indices;
};

inline ImbalanceReport imbalance(const std::vector<Circuit>& circuits) {
  if (circuits.empty()) throw Error(ErrorKind::EmptySet, "imbalance of an empty circuit set");
  std::optional<ImbalanceReport> best;
  for (const auto& c : circuits) {
    std::size_t hi = c.vector.size(), lo = c.vector.size();
    for (std::size_t i = 0; i < c.vector.size(); ++i) {
      if (c.vector[i] == 0) continue;
      if (hi == c.vector.size() || abs(c.vector[i]) > abs(c.vector[hi])) hi = i;
      if (lo == c.vector.size() || abs(c.vector[i]) < abs(c.vector[lo])) lo = i;
    }
    if (hi == c.vector.size()) throw Error(ErrorKind::ZeroVector, "zero vector in circuit set");
    Rational k(abs(c.vector[hi]), abs(c.vector[lo]));
    k.canonicalize();
    if (!best || k > best->kappa) best = ImbalanceReport{k, c, {hi, lo}};
  }
  return *best;
}

// ----------------------------------------------------------- feasibility

inline bool is_feasible(const ConstraintSystem& sys, std::span<const Rational> x) {
  if (x.size() != sys.n()) throw Error(ErrorKind::DimensionMismatch, "point length differs from n");
  RatVector ax = multiply(sys.A, x);
  for (std::size_t i = 0; i < ax.size(); ++i)
    if (ax[i] != sys.b[i]) return false;
  RatVector bx = multiply(sys.B, x);
  for (std::size_t i = 0; i < bx.size(); ++i)
    if (bx[i] > sys.d[i]) return false;
  return true;
}

inline std::vector<std::size_t> tight_rows(const ConstraintSystem& sys, std::span<const Rational> x) {
  RatVector bx = multiply(sys.B, x);
  std::vector<std::size_t> t;
  for (std::size_t i = 0; i < bx.size(); ++i)
    if (bx[i] == sys.d[i]) t.push_back(i);
  return t;
}

inline bool is_extreme_point(const ConstraintSystem& sys, std::span<const Rational> x) {
  if (!is_feasible(sys, x)) return false;
  EchelonBasis e(sys.n());
  for (std::size_t r = 0; r < sys.m_A(); ++r) e.insert(sys.A.row(r));
  for (auto r : tight_rows(sys, x)) e.insert(sys.B.row(r));
  return e.rank() == sys.n();
}

// A direction is feasible at x when A g = 0 and it does not push any tight row.
inline bool direction_feasible(const ConstraintSystem& sys, std::span<const Rational> x,
                               std::span<const Rational> g) {
  if (!is_zero(multiply(sys.A, g))) return false;
  RatVector bx = multiply(sys.B, x);
  for (std::size_t i = 0; i < sys.m_B(); ++i) {
    if (bx[i] != sys.d[i]) continue;
    if (dot(sys.B.row(i), g) > 0) return false;
  }
  return true;
}

struct FeasibleCircuit {
  Circuit circuit;
  int sign;  // +1 or -1
  IntVector direction() const { return sign > 0 ? circuit.vector : negate(circuit.vector); }
};

inline std::vector<FeasibleCircuit> feasible_circuits_at(const ConstraintSystem& sys, std::span<const Rational> x,
                                                         const std::vector<Circuit>& pool) {
  if (!is_feasible(sys, x)) throw Error(ErrorKind::InfeasiblePoint, "x violates the system");
  RatVector bx = multiply(sys.B, x);
  std::vector<std::size_t> tight;
  for (std::size_t i = 0; i < bx.size(); ++i)
    if (bx[i] == sys.d[i]) tight.push_back(i);
  std::vector<FeasibleCircuit> out;
  for (const auto& c : pool) {
    RatVector g = to_rational(c.vector);
    if (!is_zero(multiply(sys.A, g))) continue;
    bool pos = true, neg = true;
    for (auto i : tight) {
      Rational v = dot(sys.B.row(i), g);
      if (v > 0) pos = false;
      if (v < 0) neg = false;
    }
    if (pos) out.push_back({c, +1});
    if (neg) out.push_back({c, -1});
  }
  return out;
}

// Largest eps with x + eps g feasible; nullopt means unbounded.
inline std::optional<Rational> max_step(const ConstraintSystem& sys, std::span<const Rational> x,
                                        std::span<const Rational> g) {
  if (!is_feasible(sys, x)) throw Error(ErrorKind::InfeasiblePoint, "x violates the system");
  if (!direction_feasible(sys, x, g)) throw Error(ErrorKind::InfeasibleDirection, "g is not feasible at x");
  RatVector bx = multiply(sys.B, x);
  std::optional<Rational> best;
  for (std::size_t i = 0; i < sys.m_B(); ++i) {
    Rational bg = dot(sys.B.row(i), g);
    if (bg <= 0) continue;
    Rational t = (sys.d[i] - bx[i]) / bg;
    if (!best || t < *best) best = t;
  }
  return best;
}

inline std::optional<Rational> max_step(const ConstraintSystem& sys, std::span<const Rational> x, const IntVector& g) {
  return max_step(sys, x, to_rational(g));
}

// ----------------------------------------------------------------- walks

struct WalkTrace {
  std::vector<RatVector> points;
  std::vector<IntVector> circuits_used;  // signed directions, coprime
  std::vector<Rational> step_lengths;

  std::size_t length() const { return step_lengths.size(); }
};

inline RatVector advance(std::span<const Rational> x, const Rational& eps, const IntVector& g) {
  RatVector y(x.begin(), x.end());
  for (std::size_t i = 0; i < y.size(); ++i)
    if (g[i] != 0) y[i] += eps * g[i];
  return y;
}

struct WalkViolation {
  std::size_t index;
  std::string kind;
  std::string message;
};

inline std::optional<WalkViolation> validate_walk(const ConstraintSystem& sys, const WalkTrace& t) {
  auto fail = [](std::size_t i, std::string kind, std::string msg) {
    return std::optional<WalkViolation>(WalkViolation{i, std::move(kind), std::move(msg)});
  };
  const std::size_t k = t.step_lengths.size();
  if (t.points.size() != k + 1 || t.circuits_used.size() != k)
    return fail(0, "shape", "trace needs k+1 points, k circuits and k step lengths");
  if (!is_extreme_point(sys, t.points[0])) return fail(0, "start", "x_0 not an extreme point");
  for (std::size_t i = 0; i < k; ++i) {
    const auto& x = t.points[i];
    const auto& g = t.circuits_used[i];
    const std::string si = std::to_string(i);
    if (!is_feasible(sys, x)) return fail(i, "feasibility", "x_" + si + " infeasible");
    if (g.size() != sys.n() || std::all_of(g.begin(), g.end(), [](const Integer& z) { return z == 0; }))
      return fail(i, "circuit", "g_" + si + " not a circuit");
    if (gcd_of(g) != 1 || !is_circuit(sys, g).is_circuit()) return fail(i, "circuit", "g_" + si + " not a circuit");
    if (t.step_lengths[i] <= 0) return fail(i, "step", "step " + si + " not positive");
    if (advance(x, t.step_lengths[i], g) != t.points[i + 1])
      return fail(i, "step", "x_" + std::to_string(i + 1) + " != x_" + si + " + eps_" + si + " g_" + si);
    RatVector gr = to_rational(g);
    if (!direction_feasible(sys, x, gr)) return fail(i, "maximality", "step " + si + " not maximal");
    auto m = max_step(sys, x, gr);
    if (!m || *m != t.step_lengths[i]) return fail(i, "maximality", "step " + si + " not maximal");
  }
  if (!is_feasible(sys, t.points[k])) return fail(k, "feasibility", "x_" + std::to_string(k) + " infeasible");
  return std::nullopt;
}

inline std::string point_key(std::span<const Rational> x) {
  std::string s;
  for (const auto& q : x) {
    s += q.get_str();
    s += ',';
  }
  return s;
}

struct WalkSearch {
  enum class Status { Found, NotFound, CapExceeded };
  Status status;
  std::optional<WalkTrace> trace;
  std::size_t explored = 0;
};

inline const char* to_string(WalkSearch::Status s) {
  switch (s) {
    case WalkSearch::Status::Found: return "Found";
    case WalkSearch::Status::NotFound: return "NotFound";
    case WalkSearch::Status::CapExceeded: return "CapExceeded";
  }
  return "?";
}

struct WalkSearchOptions {
  std::size_t depth_cap = 12;
  bool integral_only = false;
  std::size_t max_states = 2000000;
};

// Breadth-first search over maximal circuit steps. States are exact points.
inline WalkSearch walk_bfs(const ConstraintSystem& sys, const RatVector& start, const RatVector& target,
                           const std::vector<Circuit>& pool, WalkSearchOptions opt = {}) {
  if (!is_feasible(sys, start)) throw Error(ErrorKind::InfeasiblePoint, "start infeasible");
  if (!is_feasible(sys, target)) throw Error(ErrorKind::InfeasiblePoint, "target infeasible");
  if (!is_extreme_point(sys, start)) throw Error(ErrorKind::BadInstance, "start is not an extreme point");

  struct Node {
    RatVector x;
    std::size_t parent;
    IntVector dir;
    Rational eps;
    std::size_t depth;
  };
  std::vector<Node> nodes{{start, 0, {}, 0, 0}};
  std::unordered_map<std::string, std::size_t> seen{{point_key(start), 0}};
  const std::string goal = point_key(target);

  auto rebuild = [&](std::size_t at) {
    WalkTrace t;
    std::vector<std::size_t> chain;
    for (std::size_t v = at; v != 0; v = nodes[v].parent) chain.push_back(v);
    std::reverse(chain.begin(), chain.end());
    t.points.push_back(start);
    for (auto v : chain) {
      t.points.push_back(nodes[v].x);
      t.circuits_used.push_back(nodes[v].dir);
      t.step_lengths.push_back(nodes[v].eps);
    }
    return t;
  };

  if (point_key(start) == goal) return {WalkSearch::Status::Found, rebuild(0), 1};
  bool truncated = false;
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    std::size_t cur = queue.front();
    queue.pop_front();
    if (nodes[cur].depth >= opt.depth_cap) {
      truncated = true;
      continue;
    }
    const RatVector x = nodes[cur].x;
    for (const auto& fc : feasible_circuits_at(sys, x, pool)) {
      IntVector dir = fc.direction();
      auto eps = max_step(sys, x, dir);
      if (!eps || *eps == 0) continue;
      RatVector y = advance(x, *eps, dir);
      if (opt.integral_only && !is_integral(y)) continue;
      std::string key = point_key(y);
      if (seen.count(key)) continue;
      nodes.push_back({std::move(y), cur, std::move(dir), *eps, nodes[cur].depth + 1});
      seen.emplace(key, nodes.size() - 1);
      if (key == goal) return {WalkSearch::Status::Found, rebuild(nodes.size() - 1), nodes.size()};
      if (nodes.size() > opt.max_states) return {WalkSearch::Status::CapExceeded, std::nullopt, nodes.size()};
      queue.push_back(nodes.size() - 1);
    }
  }
  return {truncated ? WalkSearch::Status::CapExceeded : WalkSearch::Status::NotFound, std::nullopt, nodes.size()};
}

}  // namespace circuitkit
