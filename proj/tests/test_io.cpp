#include <gtest/gtest.h>

#include "circuitkit/io.hpp"

using namespace circuitkit;
using io::Json;

namespace {

template <class F>
ParseFailure parse_failure(F&& f) {
  try {
    f();
  } catch (const ParseFailure& e) {
    return e;
  }
  ADD_FAILURE() << "no ParseFailure";
  return ParseFailure(ErrorKind::ParseError, -1, "");
}

}  // namespace

TEST(GraphText, CommentsAndBlankLines) {
  auto g = io::graph_from_text("# triangle\n0 1\n\n1 2  # middle\n2 0\n");
  EXPECT_EQ(g.vertex_count(), 3);
  EXPECT_EQ(g.edge_count(), 3);
  EXPECT_TRUE(g.edge_id(0, 2));
}

TEST(GraphText, ErrorsCarryLineNumbers) {
  auto loop = parse_failure([] { io::graph_from_text("0 1\n1 1\n"); });
  EXPECT_EQ(loop.kind(), ErrorKind::LoopEdge);
  EXPECT_EQ(loop.line(), 2);
  auto dup = parse_failure([] { io::graph_from_text("0 1\n# c\n1 0\n"); });
  EXPECT_EQ(dup.kind(), ErrorKind::DuplicateEdge);
  EXPECT_EQ(dup.line(), 3);
  auto bad = parse_failure([] { io::graph_from_text("0 1\n2 x\n"); });
  EXPECT_EQ(bad.kind(), ErrorKind::ParseError);
  EXPECT_EQ(bad.line(), 2);
  EXPECT_EQ(parse_failure([] { io::graph_from_text("0 1 2\n"); }).line(), 1);
  EXPECT_EQ(parse_failure([] { io::graph_from_text("-1 2\n"); }).kind(), ErrorKind::ParseError);
}

TEST(GraphJson, RoundTripAndErrors) {
  const Graph p = triangular_prism();
  const Graph q = io::graph_from_json(io::to_json(p));
  ASSERT_EQ(q.edge_count(), p.edge_count());
  for (int e = 0; e < p.edge_count(); ++e) {
    EXPECT_EQ(q.edge(e).u, p.edge(e).u);
    EXPECT_EQ(q.edge(e).v, p.edge(e).v);
  }
  EXPECT_THROW(io::graph_from_json(Json::parse(R"({"n":2,"edges":[[0,2]]})")), ParseFailure);
  EXPECT_EQ(parse_failure([] { io::graph_from_json(Json::parse(R"({"n":2,"edges":[[1,1]]})")); }).kind(), ErrorKind::LoopEdge);
  EXPECT_THROW(io::graph_from_json(Json::parse(R"({"edges":[]})")), ParseFailure);
  EXPECT_EQ(io::graph_from_string(R"({"n":3,"edges":[[0,1]]})").vertex_count(), 3);
  EXPECT_EQ(io::graph_from_string("0 1\n").vertex_count(), 2);
}

TEST(JsonText, ParseErrorLine) {
  auto e = parse_failure([] { io::parse_json_text("{\n\"a\": 1,\n\"b\": ]\n}"); });
  EXPECT_EQ(e.line(), 3);
}

TEST(Numbers, RationalFormats) {
  EXPECT_EQ(io::rat(Rational(3)), "3/1");
  EXPECT_EQ(io::rat(Rational(-1, 2)), "-1/2");
  EXPECT_EQ(io::rat_from(Json("6/4")), Rational(3, 2));
  EXPECT_EQ(io::rat_from(Json(-7)), Rational(-7));
  EXPECT_THROW(io::rat_from(Json("1/0")), Error);
  const IntVector big{Integer("123456789012345678901234567890"), Integer(-1)};
  EXPECT_EQ(io::int_vector_from(io::int_vector(big)), big);
}

TEST(System, RoundTrip) {
  ConstraintSystem s(3);
  s.variable_labels = {"x", "y", "z"};
  s.add_equality(RatVector{1, 1, 1}, 1, "sum");
  s.add_inequality(RatVector{Rational(1, 2), 0, -1}, Rational(2, 3), "r0");
  s.add_inequality(RatVector{0, 1, 0}, 0, "r1");
  auto t = io::system_from_json(io::to_json(s));
  EXPECT_EQ(io::to_json(t), io::to_json(s));
  EXPECT_EQ(t.inequality_label(0), "r0");
  EXPECT_EQ(t.d[0], Rational(2, 3));
}

TEST(Trace, RoundTrip) {
  WalkTrace w;
  w.points = {RatVector{0, 0}, RatVector{1, Rational(1, 2)}};
  w.circuits_used = {IntVector{Integer(2), Integer(1)}};
  w.step_lengths = {Rational(1, 2)};
  auto back = io::trace_from_json(io::to_json(w));
  EXPECT_EQ(back.points, w.points);
  EXPECT_EQ(back.circuits_used, w.circuits_used);
  EXPECT_EQ(back.step_lengths, w.step_lengths);
}

TEST(ColoringJson, PaletteMapping) {
  const Graph g = path_graph(3);
  auto c = io::coloring_from_json(g, Json::parse(R"({"palette":[7,3,9],"assignment":{"0":3,"1":9,"2":3}})"));
  EXPECT_EQ(c.palette_size, 3);
  EXPECT_EQ(c.assignment, (std::vector<int>{1, 2, 1}));
  EXPECT_EQ(io::coloring_from_json(g, io::to_json(g, c)), c);
  EXPECT_THROW(io::coloring_from_json(g, Json::parse(R"({"palette":[0,1],"assignment":{"0":0,"1":1}})")), Error);
  EXPECT_THROW(io::coloring_from_json(g, Json::parse(R"({"palette":[0,1],"assignment":{"0":0,"1":5,"2":0}})")), Error);
}

TEST(SignedJson, KeysAndRanges) {
  const Graph g = path_graph(4);
  auto x = io::signed_from_json(g, Json::parse(R"({"edges":{"0":1,"1-2":-1}})"));
  EXPECT_EQ(x, (IntVector{Integer(1), Integer(-1), Integer(0)}));
  EXPECT_EQ(io::signed_from_json(g, io::to_json_signed(g, x)), x);
  EXPECT_THROW(io::signed_from_json(g, Json::parse(R"({"edges":{"0":2}})")), Error);
  EXPECT_THROW(io::signed_from_json(g, Json::parse(R"({"edges":{"9":1}})")), Error);
  EXPECT_EQ(io::edge_list_from_json(g, Json::parse("[0,[2,3]]")), (std::vector<int>{0, 2}));
  EXPECT_THROW(io::edge_list_from_json(g, Json::parse("[[0,3]]")), Error);
}

TEST(Csv, FlattensAndQuotes) {
  Json a = Json::parse(R"({"claim":"x","parameters":{"k":2},"verdict":"pass","note":"a,b","evidence":{"v":[1,2]}})");
  Json b = Json::parse(R"({"claim":"y","parameters":{"k":3},"verdict":"fail","extra":1})");
  const std::string csv = io::to_csv({a, b});
  EXPECT_EQ(csv, "claim,parameters.k,verdict,note,extra\nx,2,pass,\"a,b\",\ny,3,fail,,1\n");
}
