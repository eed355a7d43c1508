#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "circuitkit/claims.hpp"

using namespace circuitkit;
using io::Json;

namespace {

enum Exit { Pass = 0, Fail = 1, Usage = 2, Cap = 3 };

struct Global {
  claims::Caps caps;
  std::uint64_t seed = 1;
  std::string format = "json";
  bool timing = false;
};

// "key=value,key=value"; keys accept either dashes or underscores.
void apply_caps(claims::Caps& c, const std::string& text) {
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::BadParameter, "CIRCUITKIT_CAPS entry without '=': " + item);
    std::string k = item.substr(0, eq);
    std::replace(k.begin(), k.end(), '_', '-');
    const std::string v = item.substr(eq + 1);
    unsigned long long n = 0;
    try {
      std::size_t used = 0;
      n = std::stoull(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
    } catch (const std::exception&) {
      throw Error(ErrorKind::BadParameter, "cap " + k + " needs a nonnegative integer");
    }
    if (k == "max-vars") c.max_vars = n;
    else if (k == "max-vertices") c.max_vertices = static_cast<int>(n);
    else if (k == "depth-cap") c.depth_cap = n;
    else if (k == "subset-cap") c.subset_cap = n;
    else throw Error(ErrorKind::BadParameter, "unknown cap " + k);
  }
}

// Inline JSON when it looks like JSON, otherwise a file.
Json json_arg(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\n");
  if (first != std::string::npos && (s[first] == '{' || s[first] == '[')) return io::parse_json_text(s);
  return io::parse_json_text(io::read_file(s));
}

void emit(const Global& gl, const std::vector<Json>& rows, bool as_array) {
  if (gl.format == "csv") {
    std::cout << io::to_csv(rows);
    return;
  }
  if (as_array) {
    Json a = Json::array();
    for (const auto& r : rows) a.push_back(r);
    std::cout << a.dump(2) << "\n";
  } else {
    std::cout << rows.front().dump(2) << "\n";
  }
}

int emit_one(const Global& gl, const Json& j, bool ok = true) {
  emit(gl, {j}, false);
  return ok ? Pass : Fail;
}

EnumerationOptions enum_options(const Global& gl) {
  EnumerationOptions o;
  o.max_vars = gl.caps.max_vars;
  return o;
}

std::vector<int> forest_arg(const Graph& g, const std::string& s) {
  if (s.empty()) return {};
  return io::edge_list_from_json(g, json_arg(s));
}

}  // namespace

int main(int argc, char** argv) {
  Global gl;
  CLI::App app{"circuitkit: circuits of graph polyhedra"};
  app.require_subcommand(1);
  app.add_option("--max-vars", gl.caps.max_vars, "variable cap for enumeration")->capture_default_str();
  app.add_option("--max-vertices", gl.caps.max_vertices, "vertex cap for subset systems")->capture_default_str();
  app.add_option("--depth-cap", gl.caps.depth_cap, "BFS depth cap")->capture_default_str();
  std::size_t subset_cap = 0;
  auto* subset_opt = app.add_option("--subset-cap", subset_cap, "vertex-subset cap (coloring 8, forest 10)");
  app.add_option("--seed", gl.seed, "64-bit seed for randomized sweeps")->capture_default_str();
  app.add_option("--format", gl.format, "output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_flag("--timing", gl.timing, "include wall_time in claim reports");

  // ratmat
  auto* ratmat = app.add_subcommand("ratmat", "exact linear algebra");
  ratmat->require_subcommand(1);
  std::string matrix_arg;
  auto* rm_kernel = ratmat->add_subcommand("kernel", "rank and kernel basis of a matrix");
  rm_kernel->add_option("--matrix", matrix_arg, "JSON rows of \"p/q\" or integers")->required();

  // circuits
  auto* circ = app.add_subcommand("circuits", "circuit oracle, enumeration, walks");
  circ->require_subcommand(1);
  std::string system_arg, vector_arg, from_arg, to_arg, method = "row-subsets";
  bool integral_only = false;
  auto* c_enum = circ->add_subcommand("enumerate", "all circuits of a system");
  c_enum->add_option("--system", system_arg)->required();
  c_enum->add_option("--method", method)->check(CLI::IsMember({"row-subsets", "supports"}))->capture_default_str();
  auto* c_test = circ->add_subcommand("is-circuit", "decide whether a vector is a circuit");
  c_test->add_option("--system", system_arg)->required();
  c_test->add_option("--vector", vector_arg, "JSON array or file")->required();
  auto* c_imb = circ->add_subcommand("imbalance", "largest entry ratio over all circuits");
  c_imb->add_option("--system", system_arg)->required();
  auto* c_walk = circ->add_subcommand("walk", "shortest circuit walk by BFS");
  c_walk->add_option("--system", system_arg)->required();
  c_walk->add_option("--from", from_arg)->required();
  c_walk->add_option("--to", to_arg)->required();
  c_walk->add_flag("--integral-only", integral_only);
  auto* c_check = circ->add_subcommand("validate-walk", "check a walk trace against a system");
  c_check->add_option("--system", system_arg)->required();
  c_check->add_option("--trace", vector_arg)->required();

  // gadgets
  auto* gad = app.add_subcommand("gadgets", "imbalance gadget instances");
  gad->require_subcommand(1);
  std::string kind_arg = "thm21", family_arg, out_arg;
  int k_arg = 2;
  bool no_tail = false;
  auto add_gadget_opts = [&](CLI::App* s) {
    s->add_option("--kind", kind_arg)->check(CLI::IsMember({"thm21", "thm22", "thm23", "thm24", "coloring"}))->capture_default_str();
    s->add_option("--k", k_arg)->capture_default_str();
    s->add_option("--family", family_arg, "thm21 set family");
    s->add_flag("--no-tail", no_tail, "drop the closing tail edge");
  };
  auto* g_export = gad->add_subcommand("export", "system JSON plus designated-entries sidecar");
  add_gadget_opts(g_export);
  g_export->add_option("--out", out_arg, "write PREFIX.system.json and PREFIX.sidecar.json");
  auto* g_kappa = gad->add_subcommand("imbalance", "enumerate circuits of the instance and report kappa");
  add_gadget_opts(g_kappa);
  g_kappa->add_option("--method", method)->check(CLI::IsMember({"full", "within"}));

  // coloring
  auto* col = app.add_subcommand("coloring", "fractional coloring polytope");
  col->require_subcommand(1);
  std::string graph_arg, c1_arg, c2_arg, adjacency = "circuit";
  int colors = 3;
  auto* col_test = col->add_subcommand("circuit-test", "is X(c2) - X(c1) a circuit");
  col_test->add_option("--graph", graph_arg)->required();
  col_test->add_option("--c1", c1_arg)->required();
  col_test->add_option("--c2", c2_arg)->required();
  auto* col_walk = col->add_subcommand("walk", "shortest walk through proper colorings");
  col_walk->add_option("--graph", graph_arg)->required();
  col_walk->add_option("--colors", colors)->capture_default_str();
  col_walk->add_option("--c1", c1_arg)->required();
  col_walk->add_option("--c2", c2_arg)->required();
  auto* col_rg = col->add_subcommand("reconfig-graph", "nodes and edges of the reconfiguration graph");
  col_rg->add_option("--graph", graph_arg)->required();
  col_rg->add_option("--colors", colors)->capture_default_str();
  col_rg->add_option("--adjacency", adjacency)->check(CLI::IsMember({"circuit", "kempe"}))->capture_default_str();

  // forest
  auto* fo = app.add_subcommand("forest", "max-weight forest polytope");
  fo->require_subcommand(1);
  std::string route = "general";
  auto* f_cls = fo->add_subcommand("classify", "circuit test with drop witness and structure");
  f_cls->add_option("--graph", graph_arg)->required();
  f_cls->add_option("--vector", vector_arg, "SignedEdgeVector JSON or file")->required();
  auto* f_bal = fo->add_subcommand("balanced-sets", "balanced vertex sets and pairs");
  f_bal->add_option("--graph", graph_arg)->required();
  f_bal->add_option("--vector", vector_arg)->required();
  auto* f_walk = fo->add_subcommand("walk", "constructive walk between forests");
  f_walk->add_option("--graph", graph_arg)->required();
  f_walk->add_option("--from", from_arg, "edge list; omitted means the empty forest");
  f_walk->add_option("--to", to_arg)->required();
  f_walk->add_option("--route", route)->check(CLI::IsMember({"general", "complete"}))->capture_default_str();
  auto* f_lb = fo->add_subcommand("lower-bound", "confirm X(F) is not within two steps of 0");
  f_lb->add_option("--graph", graph_arg)->required();
  f_lb->add_option("--forest", to_arg)->required();

  // claims
  auto* cl = app.add_subcommand("claim", "run a replication driver");
  std::string claim_id;
  std::vector<std::string> params, sweeps;
  cl->add_option("id", claim_id, "claim id, or 'list'")->required();
  cl->add_option("--param", params, "key=value")->take_all();
  cl->add_option("--sweep", sweeps, "key=v1,v2,... (one report per point)")->take_all();
  auto* ver = app.add_subcommand("verify-evidence", "re-check a saved claim report");
  std::string report_arg;
  ver->add_option("report", report_arg, "report JSON file")->required();

  // global flags may also follow the subcommand
  std::function<void(CLI::App*)> fall = [&](CLI::App* a) {
    for (auto* s : a->get_subcommands({})) {
      s->fallthrough();
      fall(s);
    }
  };
  fall(&app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? Pass : Usage;
  }

  try {
    claims::Caps flags = gl.caps;
    gl.caps = {};
    if (const char* env = std::getenv("CIRCUITKIT_CAPS")) apply_caps(gl.caps, env);
    // explicit flags win over the environment
    if (app.count("--max-vars")) gl.caps.max_vars = flags.max_vars;
    if (app.count("--max-vertices")) gl.caps.max_vertices = flags.max_vertices;
    if (app.count("--depth-cap")) gl.caps.depth_cap = flags.depth_cap;
    if (subset_opt->count()) gl.caps.subset_cap = subset_cap;

    if (*rm_kernel) {
      Json m = json_arg(matrix_arg);
      std::vector<RatVector> rows;
      for (const auto& r : m) rows.push_back(io::rat_vector_from(r));
      const std::size_t cols = rows.empty() ? 0 : rows.front().size();
      for (const auto& r : rows)
        if (r.size() != cols) throw Error(ErrorKind::DimensionMismatch, "ragged matrix");
      RatMatrix M = RatMatrix::from_rows(rows, cols);
      Json out{{"rank", rank(M)}, {"kernel", Json::array()}};
      for (const auto& v : kernel_basis(M)) out["kernel"].push_back(io::rat_vector(v));
      return emit_one(gl, out);
    }

    if (*circ) {
      const ConstraintSystem sys = io::system_from_json(json_arg(system_arg));
      if (*c_enum) {
        auto o = enum_options(gl);
        if (method == "supports") o.method = EnumerationMethod::SupportBruteForce;
        auto cs = enumerate_circuits(sys, o);
        return emit_one(gl, {{"count", cs.size()}, {"circuits", io::to_json(cs)}});
      }
      if (*c_test) {
        const RatVector g = io::rat_vector_from(json_arg(vector_arg));
        auto d = is_circuit(sys, g);
        Json out{{"verdict", to_string(d.verdict)}};
        if (!d.witness.empty()) out["witness"] = io::rat_vector(d.witness);
        return emit_one(gl, out, d.is_circuit());
      }
      if (*c_imb) {
        auto cs = enumerate_circuits(sys, enum_options(gl));
        auto im = imbalance(cs);
        return emit_one(gl, {{"kappa", io::rat(im.kappa)},
                             {"circuits", cs.size()},
                             {"witness", io::int_vector(im.witness_circuit.vector)},
                             {"ratio_entries", {im.witness_indices.first, im.witness_indices.second}}});
      }
      if (*c_walk) {
        auto pool = enumerate_circuits(sys, enum_options(gl));
        WalkSearchOptions wo;
        wo.depth_cap = gl.caps.depth_cap;
        wo.integral_only = integral_only;
        auto w = walk_bfs(sys, io::rat_vector_from(json_arg(from_arg)), io::rat_vector_from(json_arg(to_arg)), pool, wo);
        if (w.status == WalkSearch::Status::CapExceeded) throw Error(ErrorKind::CapExceeded, "walk search hit the depth cap");
        Json out{{"status", to_string(w.status)}, {"explored", w.explored}};
        if (w.trace) {
          out["length"] = w.trace->length();
          out["trace"] = io::to_json(*w.trace);
        }
        return emit_one(gl, out, w.status == WalkSearch::Status::Found);
      }
      if (*c_check) {
        auto v = validate_walk(sys, io::trace_from_json(json_arg(vector_arg)));
        Json out{{"valid", !v}};
        if (v) out["violation"] = {{"index", v->index}, {"message", v->message}};
        return emit_one(gl, out, !v);
      }
    }

    if (*gad) {
      const std::map<std::string, gadgets::GadgetKind> kinds{{"thm21", gadgets::GadgetKind::Thm21},
                                                             {"thm22", gadgets::GadgetKind::Thm22},
                                                             {"thm23", gadgets::GadgetKind::Thm23},
                                                             {"thm24", gadgets::GadgetKind::Thm24},
                                                             {"coloring", gadgets::GadgetKind::Coloring}};
      if (*g_kappa && kind_arg != "coloring") {
        claims::Params ps;
        ps.caps = gl.caps;
        ps.values["k"] = std::to_string(k_arg);
        if (!family_arg.empty()) ps.values["family"] = family_arg;
        if (no_tail) ps.values["tail"] = "false";
        if (g_kappa->count("--method")) ps.values["method"] = method;
        auto r = claims::run_claim(kind_arg, ps);
        return emit_one(gl, claims::to_json(r, gl.timing), r.pass);
      }
      gadgets::GadgetOptions o;
      if (!family_arg.empty()) o.family = gadgets::family_from_string(family_arg);
      o.tail = !no_tail;
      auto inst = gadgets::gadget(kinds.at(kind_arg), k_arg, o);
      Json sidecar{{"kind", gadgets::to_string(inst.kind)},
                   {"k", inst.k},
                   {"designated_entries", inst.designated_entries},
                   {"designated_labels", Json::array()},
                   {"seed_vector", io::rat_vector(inst.seed_vector)}};
      for (auto i : inst.designated_entries) sidecar["designated_labels"].push_back(inst.system.variable_labels.at(i));
      if (kind_arg == "thm21") sidecar["family"] = gadgets::to_string(inst.family);
      if (*g_kappa) {
        auto cs = circuits_within(inst.system, inst.seed_vector, enum_options(gl));
        auto im = imbalance(cs);
        const bool ok = im.kappa >= 4;
        return emit_one(gl, {{"kappa", io::rat(im.kappa)}, {"circuits_within_support", cs.size()},
                             {"witness", io::int_vector(im.witness_circuit.vector)}}, ok);
      }
      if (out_arg.empty()) return emit_one(gl, {{"system", io::to_json(inst.system)}, {"sidecar", sidecar}});
      std::ofstream(out_arg + ".system.json") << io::to_json(inst.system).dump(2) << "\n";
      std::ofstream(out_arg + ".sidecar.json") << sidecar.dump(2) << "\n";
      return emit_one(gl, {{"system", out_arg + ".system.json"}, {"sidecar", out_arg + ".sidecar.json"}});
    }

    if (*col) {
      const Graph g = claims::named_graph(graph_arg);
      coloring::StepOptions so;
      if (gl.caps.subset_cap) so.subset_cap = *gl.caps.subset_cap;
      if (*col_test) {
        auto c1 = io::coloring_from_json(g, json_arg(c1_arg)), c2 = io::coloring_from_json(g, json_arg(c2_arg));
        auto t = coloring::difference_is_circuit(g, c1, c2);
        return emit_one(gl, {{"is_circuit", t.is_circuit}, {"difference", io::int_vector(coloring::difference(c1, c2))}},
                        t.is_circuit);
      }
      if (*col_walk) {
        auto c1 = io::coloring_from_json(g, json_arg(c1_arg)), c2 = io::coloring_from_json(g, json_arg(c2_arg));
        auto w = coloring::proper_walk_bfs(g, colors, c1, c2, so);
        Json cs = Json::array();
        for (const auto& c : w.colorings) cs.push_back(io::to_json(g, c));
        return emit_one(gl, {{"length", w.length()}, {"colorings", cs}, {"trace", io::to_json(w.trace)}});
      }
      if (*col_rg) {
        auto rg = coloring::reconfiguration_graph(
            g, colors, adjacency == "kempe" ? coloring::Adjacency::KempeTwoColor : coloring::Adjacency::Circuit);
        Json nodes = Json::array(), edges = Json::array();
        for (const auto& c : rg.nodes) nodes.push_back(c.assignment);
        for (auto [a, b] : rg.edges) edges.push_back({a, b});
        return emit_one(gl, {{"colors", colors}, {"adjacency", adjacency}, {"components", rg.components},
                             {"nodes", nodes}, {"edges", edges}});
      }
    }

    if (*fo) {
      const Graph g = claims::named_graph(graph_arg);
      if (*f_cls) {
        auto x = io::signed_from_json(g, json_arg(vector_arg));
        auto c = forest::classify_01(g, forest::rank_system(g, {gl.caps.max_vertices, false}), x);
        Json out{{"is_circuit", c.is_circuit}, {"structure", forest::to_string(forest::structure_recognizer(g, x))}};
        if (c.witness) {
          Json w{{"kind", forest::to_string(c.witness->kind)}, {"y", io::rat_vector(c.witness->y)},
                 {"extra_zero_row", c.witness->extra_zero_row}};
          if (c.witness->kind == forest::DropWitness::Kind::UnitEdge) w["edge"] = c.witness->edge;
          else w["set"] = c.witness->set;
          out["witness"] = w;
        }
        if (c.structure)
          out["decomposition"] = {{"route", c.structure->route}, {"R1", c.structure->R1}, {"R2", c.structure->R2},
                                  {"diameter1", c.structure->diameter1}, {"diameter2", c.structure->diameter2},
                                  {"holds", c.structure->holds()}};
        return emit_one(gl, out, c.is_circuit);
      }
      if (*f_bal) {
        auto x = io::signed_from_json(g, json_arg(vector_arg));
        auto rep = forest::balanced_sets(g, x, gl.caps.max_vertices);
        Json sets = Json::array(), pairs = Json::array(), free = Json::array();
        for (auto m : rep.balanced) sets.push_back(forest::set_label(g, m));
        for (auto [e, f] : rep.balanced_pairs) pairs.push_back({e, f});
        for (int e : forest::support_edges(x))
          if (!rep.edge_in_some_balanced_set[static_cast<std::size_t>(e)]) free.push_back(e);
        return emit_one(gl, {{"balanced_sets", sets}, {"balanced_pairs", pairs}, {"edges_in_no_balanced_set", free}});
      }
      forest::WalkOptions wo;
      wo.max_vertices = gl.caps.max_vertices;
      if (*f_walk) {
        auto F2 = forest_arg(g, to_arg);
        auto w = from_arg.empty() ? forest::walk_zero_to_forest(g, F2, wo)
                                  : forest::walk_forest_to_forest(g, forest_arg(g, from_arg), F2,
                                                                  route == "complete" ? forest::ForestRoute::Complete
                                                                                      : forest::ForestRoute::General,
                                                                  wo);
        Json fs = Json::array();
        for (const auto& f : w.forests) fs.push_back(f);
        return emit_one(gl, {{"length", w.length()}, {"route", w.route}, {"forests", fs}, {"trace", io::to_json(w.trace)}});
      }
      if (*f_lb) {
        forest::LowerBoundOptions lo;
        lo.max_vars = gl.caps.max_vars;
        lo.max_vertices = gl.caps.max_vertices;
        auto rep = forest::lower_bound_check(g, forest_arg(g, to_arg), lo);
        return emit_one(gl, {{"confirmed", rep.confirmed}, {"explored_states", rep.explored}, {"circuits", rep.circuit_count}},
                        rep.confirmed);
      }
    }

    if (*cl) {
      if (claim_id == "list") {
        for (const auto& id : claims::claim_ids()) std::cout << id << "\n";
        return Pass;
      }
      claims::Params base;
      base.caps = gl.caps;
      base.seed = gl.seed;
      for (const auto& p : params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::BadParameter, "--param expects key=value");
        base.values[p.substr(0, eq)] = p.substr(eq + 1);
      }
      // cartesian product of the sweep axes
      std::vector<claims::Params> points{base};
      for (const auto& s : sweeps) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::BadParameter, "--sweep expects key=v1,v2");
        std::vector<claims::Params> next;
        for (const auto& pt : points) {
          std::stringstream ss(s.substr(eq + 1));
          std::string v;
          while (std::getline(ss, v, ',')) {
            auto q = pt;
            q.values[s.substr(0, eq)] = v;
            next.push_back(q);
          }
        }
        points = std::move(next);
      }
      std::vector<Json> rows;
      bool all = true;
      for (const auto& pt : points) {
        auto r = claims::run_claim(claim_id, pt);
        all = all && r.pass;
        rows.push_back(claims::to_json(r, gl.timing));
      }
      emit(gl, rows, !sweeps.empty());
      return all ? Pass : Fail;
    }

    if (*ver) {
      Json rep = io::parse_json_text(io::read_file(report_arg));
      std::vector<Json> reports;
      if (rep.is_array()) reports.assign(rep.begin(), rep.end());
      else reports.push_back(rep);
      bool all = true;
      std::vector<Json> rows;
      for (const auto& r : reports) {
        auto v = claims::verify_evidence(r, gl.caps);
        all = all && v.ok;
        rows.push_back({{"claim", r.at("claim")}, {"consistent", v.ok}, {"message", v.message}});
      }
      emit(gl, rows, reports.size() > 1);
      return all ? Pass : Fail;
    }
  } catch (const Error& e) {
    std::cerr << Json{{"error", to_string(e.kind())}, {"message", e.what()}}.dump() << "\n";
    return e.kind() == ErrorKind::CapExceeded ? Cap : Usage;
  } catch (const Json::exception& e) {
    std::cerr << Json{{"error", "ParseError"}, {"message", e.what()}}.dump() << "\n";
    return Usage;
  }
  return Usage;
}
