#include <gtest/gtest.h>

#include <curvdim/graph.hpp>
#include <curvdim/io.hpp>

#include "oracle.hpp"

using namespace curvdim;

namespace {

std::vector<GeneratorSpec> all_generators() {
  return {{Family::cycle, {3}},     {Family::cycle, {5}},     {Family::cycle, {8}},
          {Family::path, {1}},      {Family::path, {3}},      {Family::complete, {1}},
          {Family::complete, {4}},  {Family::hypercube, {1}}, {Family::hypercube, {3}},
          {Family::torus2d, {3, 3}}, {Family::torus2d, {3, 4}}, {Family::petersen, {}},
          {Family::star, {3}}};
}

std::vector<std::size_t> degrees(const Graph& g) {
  std::vector<std::size_t> out;
  for (vertex_t v = 0; v < g.vertex_count(); ++v) out.push_back(g.degree(v));
  return out;
}

}  // namespace

TEST(LoadGraph, Triangle) {
  const auto g = load_graph(R"({"n":3,"edges":[[0,1],[1,2],[0,2]]})");
  EXPECT_EQ(g.vertex_count(), 3u);
  EXPECT_EQ(degrees(g), (std::vector<std::size_t>{2, 2, 2}));
}

TEST(LoadGraph, Path) {
  const auto g = load_graph(R"({"n":3,"edges":[[0,1],[1,2]]})");
  EXPECT_EQ(degrees(g), (std::vector<std::size_t>{1, 2, 1}));
}

TEST(LoadGraph, RejectsSelfLoop) {
  EXPECT_THROW(load_graph(R"({"n":3,"edges":[[0,0]]})"), ParseError);
}

TEST(LoadGraph, RejectsOutOfRangeAndMalformed) {
  EXPECT_THROW(load_graph(R"({"n":3,"edges":[[0,3]]})"), ParseError);
  EXPECT_THROW(load_graph(R"({"n":3,"edges":[[0,-1]]})"), ParseError);
  EXPECT_THROW(load_graph(R"({"n":3,"edges":[[0,1,2]]})"), ParseError);
  EXPECT_THROW(load_graph(R"({"n":3})"), ParseError);
  EXPECT_THROW(load_graph(R"({"n":3,"edges":)"), ParseError);
  EXPECT_THROW(load_graph(R"([1,2])"), ParseError);
}

TEST(LoadGraph, DeduplicatesEdges) {
  const auto g = load_graph(R"({"n":2,"edges":[[0,1],[1,0],[0,1]]})");
  EXPECT_EQ(g.edges().size(), 1u);
  EXPECT_EQ(g.degree(0), 1u);
}

TEST(SerializeGraph, BitExactLayout) {
  const auto g = generate_graph({Family::path, {3}});
  EXPECT_EQ(serialize_graph(g), R"({"n": 3, "edges": [[0, 1], [1, 2]]})");
}

TEST(GenerateGraph, Examples) {
  const auto c5 = generate_graph({Family::cycle, {5}});
  EXPECT_EQ(c5.vertex_count(), 5u);
  EXPECT_EQ(degrees(c5), std::vector<std::size_t>(5, 2));

  const auto q3 = generate_graph({Family::hypercube, {3}});
  EXPECT_EQ(q3.vertex_count(), 8u);
  EXPECT_EQ(degrees(q3), std::vector<std::size_t>(8, 3));
  EXPECT_TRUE(q3.has_edge(0b000, 0b100));
  EXPECT_FALSE(q3.has_edge(0b000, 0b110));

  const auto t = generate_graph({Family::torus2d, {3, 4}});
  EXPECT_EQ(t.vertex_count(), 12u);
  EXPECT_EQ(degrees(t), std::vector<std::size_t>(12, 4));
  EXPECT_TRUE(t.has_edge(0, 3));  // (0,0) ~ (0,3) wraps around the row
  EXPECT_TRUE(t.has_edge(0, 8));  // (0,0) ~ (2,0) wraps around the column

  const auto p = generate_graph({Family::petersen, {}});
  EXPECT_EQ(p.vertex_count(), 10u);
  EXPECT_EQ(p.edges().size(), 15u);
  EXPECT_EQ(degrees(p), std::vector<std::size_t>(10, 3));

  const auto s = generate_graph({Family::star, {3}});
  EXPECT_EQ(degrees(s), (std::vector<std::size_t>{3, 1, 1, 1}));
}

TEST(GenerateGraph, InvalidParameters) {
  EXPECT_THROW(generate_graph({Family::cycle, {2}}), std::invalid_argument);
  EXPECT_THROW(generate_graph({Family::cycle, {}}), std::invalid_argument);
  EXPECT_THROW(generate_graph({Family::hypercube, {0}}), std::invalid_argument);
  EXPECT_THROW(generate_graph({Family::torus2d, {2, 5}}), std::invalid_argument);
  EXPECT_THROW(generate_graph({Family::petersen, {1}}), std::invalid_argument);
  EXPECT_THROW(generate_graph({Family::star, {0}}), std::invalid_argument);
  EXPECT_THROW(parse_family("wheel"), std::invalid_argument);
}

TEST(Ball, Examples) {
  EXPECT_EQ(ball(generate_graph({Family::cycle, {5}}), 0, 1), (std::vector<vertex_t>{0, 1, 4}));
  EXPECT_EQ(ball(generate_graph({Family::path, {3}}), 0, 2), (std::vector<vertex_t>{0, 1, 2}));
  EXPECT_EQ(ball(generate_graph({Family::complete, {4}}), 2, 1),
            (std::vector<vertex_t>{0, 1, 2, 3}));
  EXPECT_EQ(ball(generate_graph({Family::path, {5}}), 2, 0), (std::vector<vertex_t>{2}));
  EXPECT_THROW(ball(generate_graph({Family::path, {3}}), 3, 1), std::out_of_range);
}

TEST(GraphInvariants, AllGenerators) {
  for (const auto& spec : all_generators()) {
    const auto g = generate_graph(spec);
    SCOPED_TRACE(family_name(spec.family));
    for (vertex_t v = 0; v < g.vertex_count(); ++v) {
      EXPECT_FALSE(g.has_edge(v, v));
      for (vertex_t w : g.neighbors(v)) {
        EXPECT_LT(w, g.vertex_count());
        EXPECT_TRUE(g.has_edge(w, v));
      }
      EXPECT_EQ(g.degree(v), ball(g, v, 1).size() - 1);
    }
    EXPECT_EQ(load_graph(serialize_graph(g)), g);
  }
}

TEST(GraphInvariants, RandomGraphsRoundTrip) {
  Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = oracle::random_connected_graph(rng, 2 + rng.below(10), 0.3);
    EXPECT_EQ(load_graph(serialize_graph(g)), g);
  }
}

TEST(FunctionDocument, RoundTripsFullPrecision) {
  Rng rng(7);
  std::vector<double> values;
  for (int i = 0; i < 20; ++i) values.push_back(rng.uniform(-1e6, 1e6) * rng.unit());
  values.push_back(0.1);
  values.push_back(1.0 / 3.0);
  const VertexFunction f(values);
  EXPECT_EQ(load_function(serialize_function(f)), f);
  EXPECT_THROW(load_function(R"({"vals": []})"), ParseError);
}

TEST(VertexFunction, PositivityFlag) {
  EXPECT_TRUE(VertexFunction({1.0, 2.0}).positive());
  EXPECT_FALSE(VertexFunction({1.0, 0.0}).positive());
  EXPECT_FALSE(VertexFunction({-1.0, 2.0}).positive());
}
