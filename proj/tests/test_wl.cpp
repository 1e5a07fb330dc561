#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "gnnv/errors.hpp"
#include "gnnv/formula_io.hpp"
#include "gnnv/gnn.hpp"
#include "gnnv/model_check.hpp"
#include "gnnv/sat.hpp"
#include "gnnv/wl.hpp"

using namespace gnnv;
using namespace gnnv::wl;

namespace {

LabelledGraph uniform_graph(std::size_t n, std::vector<Edge> edges) {
  return LabelledGraph(n, 0, std::vector<Label>(n), std::move(edges));
}

LabelledGraph six_cycle() {
  std::vector<Edge> e;
  for (Vertex i = 0; i < 6; ++i) e.emplace_back(i, (i + 1) % 6);
  return symmetrize(uniform_graph(6, e));
}

LabelledGraph two_triangles() {
  std::vector<Edge> e;
  for (Vertex i = 0; i < 3; ++i) {
    e.emplace_back(i, (i + 1) % 3);
    e.emplace_back(3 + i, 3 + (i + 1) % 3);
  }
  return symmetrize(uniform_graph(6, e));
}

LabelledGraph path3() { return uniform_graph(3, {{0, 1}, {1, 2}}); }

bool refines(const Coloring& finer, const Coloring& coarser) {
  const auto& a = finer.assignment;
  const auto& b = coarser.assignment;
  for (std::size_t u = 0; u < a.size(); ++u) {
    for (std::size_t v = 0; v < a.size(); ++v) {
      if (a[u] == a[v] && b[u] != b[v]) return false;
    }
  }
  return true;
}

std::vector<Vertex> shuffled(std::size_t n, std::mt19937_64& rng) {
  std::vector<Vertex> pi(n);
  std::iota(pi.begin(), pi.end(), 0);
  std::shuffle(pi.begin(), pi.end(), rng);
  return pi;
}

}  // namespace

TEST(Refine, Examples) {
  const auto c6 = six_cycle();
  EXPECT_EQ(refine(c6, initial_coloring(c6)).class_count(), 1u);

  const auto p = path3();
  auto r1 = refine(p, initial_coloring(p));
  EXPECT_EQ(r1.class_count(), 2u);
  EXPECT_EQ(r1.assignment[0], r1.assignment[1]);
  EXPECT_NE(r1.assignment[1], r1.assignment[2]);

  const auto trace = color_refinement(p);
  const auto again = refine(p, trace.stable());
  EXPECT_TRUE(labellings_equivalent(again.assignment, trace.stable().assignment));
}

TEST(ColorRefinement, Examples) {
  LabelledGraph one = uniform_graph(1, {});
  EXPECT_EQ(color_refinement(one).stable_round, 0u);
  auto trace = color_refinement(path3());
  EXPECT_EQ(trace.stable().class_count(), 3u);
  EXPECT_EQ(color_refinement(six_cycle()).stable().class_count(), 1u);
  EXPECT_EQ(color_refinement(two_triangles()).stable().class_count(), 1u);
}

TEST(ColorRefinement, MonotoneAndStabilises) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto g = random_graph(1 + seed % 10, Rational(1, 4), 1, true, seed);
    auto trace = color_refinement(g);
    EXPECT_LT(trace.stable_round, g.size());
    for (std::size_t t = 0; t + 1 < trace.rounds.size(); ++t) EXPECT_TRUE(refines(trace.rounds[t + 1], trace.rounds[t]));
  }
}

TEST(LabellingsEquivalent, Examples) {
  std::vector<ColorId> l{3, 1, 3, 2};
  EXPECT_TRUE(labellings_equivalent(l, l));
  std::vector<ColorId> distinct{0, 1}, same{0, 0};
  EXPECT_FALSE(labellings_equivalent(distinct, same));
  std::vector<ColorId> renamed{7, 9, 7, 4};
  EXPECT_TRUE(labellings_equivalent(l, renamed));
}

TEST(CrIndist, Examples) {
  std::mt19937_64 rng(2);
  auto g = random_graph(7, Rational(1, 3), 2, true, 5);
  EXPECT_TRUE(cr_indist_graphs(g, apply_permutation(g, shuffled(7, rng))));
  EXPECT_TRUE(cr_indist_graphs(six_cycle(), two_triangles()));
  EXPECT_FALSE(cr_indist_graphs(six_cycle(), uniform_graph(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}})));

  EXPECT_TRUE(cr_indist_pointed(g, 0, g, 0));
  EXPECT_FALSE(cr_indist_pointed(path3(), 1, path3(), 2));
  EXPECT_TRUE(cr_indist_pointed(six_cycle(), 0, six_cycle(), 4));
}

TEST(CrIndist, Equivariance) {
  std::mt19937_64 rng(17);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto g = random_graph(1 + seed % 9, Rational(1, 3), 2, true, seed);
    EXPECT_TRUE(cr_indist_graphs(g, apply_permutation(g, shuffled(g.size(), rng))));
  }
}

TEST(PairTests, Examples) {
  LabelledGraph one = uniform_graph(1, {});
  EXPECT_EQ(owl2(one).histogram().size(), 1u);
  EXPECT_EQ(fwl2(one).histogram().size(), 1u);
  EXPECT_TRUE(pair_indist_graphs(six_cycle(), six_cycle(), PairTest::Fwl2));
  EXPECT_FALSE(pair_indist_graphs(six_cycle(), two_triangles(), PairTest::Fwl2));
  EXPECT_THROW(owl2(uniform_graph(65, {})), LimitExceeded);
}

TEST(PairTests, OwlDiagonalMatchesColorRefinement) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    auto g = symmetrize(random_graph(2 + seed % 10, Rational(1, 4), 1, true, seed));
    std::vector<Edge> loop_free;
    for (const auto& [u, v] : g.edges()) {
      if (u != v) loop_free.emplace_back(u, v);
    }
    LabelledGraph h(g.size(), g.dim(), g.labels(), loop_free);
    const auto cr = color_refinement(h).stable().assignment;
    const auto pc = owl2(h);
    for (Vertex u = 0; u < h.size(); ++u) {
      for (Vertex v = 0; v < h.size(); ++v) EXPECT_EQ(cr[u] == cr[v], pc.at(u, u) == pc.at(v, v));
    }
  }
}

TEST(CharacteristicFormula, BaseCase) {
  LabelledGraph g(1, 2, {{Rational(1), Rational(0)}}, {}, {"p", "q"});
  EXPECT_EQ(characteristic_formula(g, 0, 0), conj(prop("p"), neg(prop("q"))));
}

TEST(CharacteristicFormula, BlueRedGreen) {
  // Root labelled blue with three red and five green successors.
  std::vector<Label> labels{{1, 0, 0}};
  std::vector<Edge> edges;
  for (Vertex i = 1; i <= 8; ++i) {
    labels.push_back(i <= 3 ? Label{0, 1, 0} : Label{0, 0, 1});
    edges.emplace_back(0, i);
  }
  LabelledGraph g(9, 3, labels, edges, {"blue", "red", "green"});
  const Formula f = characteristic_formula(g, 0, 1);
  const Formula red = parse_formula("red & ~blue & ~green");
  const Formula green = parse_formula("green & ~blue & ~red");
  const Formula expected = conj(std::vector<Formula>{parse_formula("blue & ~red & ~green"), exactly_diamond(3, red),
                                                     exactly_diamond(5, green), box(disj(red, green))});
  EXPECT_EQ(sat::sat_ksharp(conj(f, neg(expected))).verdict, sat::Verdict::Unsat);
  EXPECT_EQ(sat::sat_ksharp(conj(expected, neg(f))).verdict, sat::Verdict::Unsat);
  EXPECT_EQ(modal_depth(f), 1u);
}

TEST(CharacteristicFormula, RejectsNonBoolean) {
  LabelledGraph g(1, 1, {{Rational(2)}}, {});
  EXPECT_THROW(characteristic_formula(g, 0, 1), InputError);
}

TEST(CharacteristicFormula, MatchesRoundColours) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto g = random_graph(2 + seed % 5, Rational(1, 3), 1, true, seed);
    auto h = random_graph(2 + (seed + 2) % 5, Rational(1, 3), 1, true, seed + 500);
    auto joint = disjoint_union(g, h);
    const std::size_t t = seed % 4;
    Coloring c = initial_coloring(joint);
    for (std::size_t i = 0; i < t; ++i) c = refine(joint, c);
    ModelChecker mc(joint);
    for (Vertex u = 0; u < g.size(); ++u) {
      const Formula f = characteristic_formula(g, u, t);
      for (Vertex v = 0; v < joint.size(); ++v) EXPECT_EQ(mc.holds(v, f), c.assignment[u] == c.assignment[v]);
    }
  }
}

TEST(GnnRefinement, EqualColoursGiveEqualVectors) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto g = random_graph(8, Rational(1, 4), 2, true, seed);
    auto n = random_gnn(2, {3, 2}, 2, seed);
    const auto colors = color_refinement(g).stable().assignment;
    const auto fw = forward(n, g);
    for (Vertex u = 0; u < g.size(); ++u) {
      for (Vertex v = 0; v < g.size(); ++v) {
        if (colors[u] != colors[v]) continue;
        for (const auto& layer : fw.layers) EXPECT_EQ(layer[u], layer[v]);
      }
    }
  }
}
