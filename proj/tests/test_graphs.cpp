#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "gnnv/errors.hpp"
#include "gnnv/graph.hpp"
#include "gnnv/graph_io.hpp"

using namespace gnnv;

namespace {

LabelledGraph cycle(std::size_t n, std::size_t offset = 0, std::size_t total = 0) {
  if (total == 0) total = n;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    const auto u = static_cast<Vertex>(offset + i);
    const auto v = static_cast<Vertex>(offset + (i + 1) % n);
    edges.emplace_back(u, v);
    edges.emplace_back(v, u);
  }
  return LabelledGraph(total, 0, std::vector<Label>(total), edges);
}

std::vector<Vertex> random_permutation(std::size_t n, std::mt19937_64& rng) {
  std::vector<Vertex> pi(n);
  std::iota(pi.begin(), pi.end(), 0);
  std::shuffle(pi.begin(), pi.end(), rng);
  return pi;
}

}  // namespace

TEST(ParseGraph, SmallestGraph) {
  auto g = parse_graph(R"({"n":1,"dim":1,"labels":[[1]],"edges":[]})");
  EXPECT_EQ(g.size(), 1u);
  EXPECT_EQ(g.label(0), Label{Rational(1)});
  EXPECT_TRUE(g.is_boolean());
}

TEST(ParseGraph, ZeroDimensional) {
  auto g = parse_graph(R"({"n":2,"dim":0,"labels":[[],[]],"edges":[[0,1]]})");
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_FALSE(g.has_edge(1, 0));
}

TEST(ParseGraph, Errors) {
  try {
    parse_graph(R"({"n":1,"dim":0,"labels":[[]],"edges":[[0,5]]})");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("edge endpoint out of range"), std::string::npos);
  }
  EXPECT_THROW(parse_graph(R"({"n":1,"dim":2,"labels":[[1]],"edges":[]})"), InputError);
  EXPECT_THROW(parse_graph(R"({"n":0,"dim":0,"labels":[],"edges":[]})"), InputError);
  EXPECT_THROW(parse_graph("{"), InputError);
}

TEST(ParseGraph, RationalsAndUndirected) {
  auto g = parse_graph(R"({"n":2,"dim":1,"labels":[["1/2"],[-3]],"edges":[[0,1]],"undirected":true})");
  EXPECT_EQ(g.label(0)[0], Rational(1, 2));
  EXPECT_TRUE(g.has_edge(1, 0));
  EXPECT_FALSE(g.is_boolean());
}

TEST(ParseGraph, RoundTrip) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto g = random_graph(1 + seed % 6, Rational(1, 3), seed % 3, seed % 2 == 0, seed);
    auto h = parse_graph(print_graph(g));
    EXPECT_EQ(h.size(), g.size());
    EXPECT_EQ(h.labels(), g.labels());
    EXPECT_EQ(h.edges(), g.edges());
  }
}

TEST(Successors, SinkAndSelfLoop) {
  LabelledGraph g(2, 0, std::vector<Label>(2), {{0, 0}});
  EXPECT_TRUE(successors(g, 1).empty());
  ASSERT_EQ(successors(g, 0).size(), 1u);
  EXPECT_EQ(successors(g, 0)[0], 0u);
}

TEST(Permutation, IdentityAndSwap) {
  LabelledGraph g(2, 1, {{Rational(1)}, {Rational(0)}}, {{0, 1}});
  std::vector<Vertex> id{0, 1}, swap{1, 0};
  auto same = apply_permutation(g, id);
  EXPECT_EQ(same.edges(), g.edges());
  auto swapped = apply_permutation(g, swap);
  EXPECT_TRUE(swapped.has_edge(1, 0));
  EXPECT_FALSE(swapped.has_edge(0, 1));
  EXPECT_EQ(swapped.label(1)[0], Rational(1));
  std::vector<Vertex> bad{0, 0};
  EXPECT_THROW(apply_permutation(g, bad), InputError);
}

TEST(Permutation, PreservesInvariantsAndIsomorphism) {
  std::mt19937_64 rng(1);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto g = random_graph(1 + seed % 7, Rational(2, 5), 2, true, seed);
    auto h = apply_permutation(g, random_permutation(g.size(), rng));
    EXPECT_EQ(h.size(), g.size());
    EXPECT_EQ(h.edge_count(), g.edge_count());
    auto a = g.labels(), b = h.labels();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b);
    EXPECT_TRUE(brute_force_isomorphic(g, h));
  }
}

TEST(Isomorphism, Examples) {
  auto g = random_graph(5, Rational(1, 2), 1, true, 3);
  EXPECT_TRUE(brute_force_isomorphic(g, g));
  EXPECT_FALSE(brute_force_isomorphic(g, random_graph(4, Rational(1, 2), 1, true, 3)));
  auto six = cycle(6);
  auto two_triangles = disjoint_union(cycle(3), cycle(3));
  EXPECT_FALSE(brute_force_isomorphic(six, two_triangles));
  EXPECT_THROW(brute_force_isomorphic(random_graph(10, 0, 0, true, 1), random_graph(10, 0, 0, true, 1)),
               LimitExceeded);
}

TEST(Isomorphism, EquivalenceRelation) {
  // Sparse small graphs so that isomorphic pairs actually occur.
  std::vector<LabelledGraph> gs;
  std::mt19937_64 rng(9);
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    auto g = random_graph(3, Rational(1, 4), 1, true, seed);
    gs.push_back(g);
    gs.push_back(apply_permutation(g, random_permutation(3, rng)));
  }
  const std::size_t n = gs.size();
  std::vector<std::vector<char>> iso(n, std::vector<char>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) iso[i][j] = brute_force_isomorphic(gs[i], gs[j]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_TRUE(iso[i][i]);
    for (std::size_t j = 0; j < n; ++j) {
      EXPECT_EQ(iso[i][j], iso[j][i]);
      for (std::size_t k = 0; k < n; ++k) {
        if (iso[i][j] && iso[j][k]) EXPECT_TRUE(iso[i][k]);
      }
    }
  }
}

TEST(RandomGraph, Contract) {
  EXPECT_EQ(random_graph(5, 0, 1, true, 1).edge_count(), 0u);
  EXPECT_EQ(random_graph(5, 1, 1, true, 1).edge_count(), 25u);
  auto a = random_graph(6, Rational(1, 2), 2, true, 42);
  auto b = random_graph(6, Rational(1, 2), 2, true, 42);
  EXPECT_EQ(a.edges(), b.edges());
  EXPECT_EQ(a.labels(), b.labels());
  EXPECT_THROW(random_graph(0, 0, 1, true, 1), InputError);
}

TEST(GraphIo, DotMentionsEveryEdge) {
  auto g = random_graph(4, Rational(1, 2), 1, true, 5);
  const auto dot = graph_to_dot(g, Vertex{0});
  for (const auto& [u, v] : g.edges()) {
    EXPECT_NE(dot.find("v" + std::to_string(u) + " -> v" + std::to_string(v)), std::string::npos);
  }
}
