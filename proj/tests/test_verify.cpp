#include <gtest/gtest.h>

#include <random>

#include "gnnv/errors.hpp"
#include "gnnv/formula_gen.hpp"
#include "gnnv/formula_io.hpp"
#include "gnnv/model_check.hpp"
#include "gnnv/oracle.hpp"
#include "gnnv/verify.hpp"

using namespace gnnv;

namespace {

GnnModel p_detector() {
  return parse_gnn(R"({"input_dim": 2, "activation": "truncReLU", "feature_names": ["p", "q"],
    "layers": [{"A": [[1, 0]], "B": [[0, 0]], "b": [0]}], "readout": {"w": [1], "b": -1}})");
}

GnnModel constant_model(int bias) {
  return parse_gnn(R"({"input_dim": 1, "activation": "truncReLU", "feature_names": ["p"],
    "layers": [{"A": [[1]], "B": [[1]], "b": [0]}], "readout": {"w": [0], "b": )" +
                   std::to_string(bias) + "}}");
}

}  // namespace

TEST(GnnToKSharp, ConstantAcceptIsValid) {
  const Formula phi = gnn_to_ksharp(constant_model(0));
  EXPECT_EQ(sat::sat_ksharp(nnf(neg(phi))).verdict, sat::Verdict::Unsat);
}

TEST(GnnToKSharp, AgreesWithForward) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GnnModel n = random_gnn(2, {2, 2}, 1, seed);
    const Formula phi = gnn_to_ksharp(n);
    for (std::uint64_t gs = 0; gs < 5; ++gs) {
      LabelledGraph g = random_graph(5, Rational(1, 3), 2, true, seed * 100 + gs);
      auto fw = forward(n, g);
      ModelChecker mc(g);
      for (Vertex u = 0; u < g.size(); ++u) EXPECT_EQ(bool(fw.accept[u]), mc.holds(u, phi));
    }
  }
}

TEST(Verify, ConstantReject) {
  auto r = verify(constant_model(-1), std::nullopt, Task::NonEmpty);
  EXPECT_EQ(r.verdict, Outcome::Fails);
  EXPECT_FALSE(r.witness.has_value());
}

TEST(Verify, ConstantAcceptContainsEverything) {
  auto r = verify(constant_model(0), parse_formula("p & <>~p"), Task::PhiSubN);
  EXPECT_EQ(r.verdict, Outcome::Holds);
}

TEST(Verify, PDetector) {
  const GnnModel n = p_detector();
  EXPECT_EQ(verify(n, parse_formula("p"), Task::Equiv).verdict, Outcome::Holds);
  auto r = verify(n, parse_formula("q"), Task::Equiv);
  ASSERT_EQ(r.verdict, Outcome::Fails);
  ASSERT_TRUE(r.witness && r.witness->graph);
  const auto& w = *r.witness->graph;
  EXPECT_TRUE(model_check(w.graph, w.point, *r.decided_by));
  EXPECT_NE(model_check(w.graph, w.point, prop("p")), model_check(w.graph, w.point, prop("q")));
}

TEST(Verify, TasksAndSpecs) {
  const GnnModel n = p_detector();
  EXPECT_EQ(verify(n, std::nullopt, Task::NonEmpty).verdict, Outcome::Holds);
  EXPECT_EQ(verify(n, parse_formula("p & q"), Task::PhiSubN).verdict, Outcome::Holds);
  EXPECT_EQ(verify(n, parse_formula("p & q"), Task::NSubPhi).verdict, Outcome::Fails);
  EXPECT_EQ(verify(n, parse_formula("p | q"), Task::NSubPhi).verdict, Outcome::Holds);
  EXPECT_EQ(verify(n, parse_formula("~p"), Task::Consistent).verdict, Outcome::Fails);
  EXPECT_EQ(verify(n, parse_formula("<>~p"), Task::Consistent).verdict, Outcome::Holds);
  EXPECT_THROW(verify(n, std::nullopt, Task::Equiv), InputError);
  EXPECT_EQ(parse_task("n-sub-phi"), Task::NSubPhi);
  EXPECT_THROW(parse_task("bogus"), InputError);
}

TEST(Verify, HoldsNotContradictedBySmallGraphs) {
  std::mt19937_64 rng(5);
  RandomFormulaConfig cfg;
  cfg.props = {"x1", "x2"};
  cfg.counting = true;
  cfg.max_size = 5;
  cfg.max_modal_depth = 1;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const GnnModel n = random_gnn(2, {2}, 1, seed);
    const Formula phi = random_formula(cfg, rng);
    for (Task t : {Task::NSubPhi, Task::PhiSubN}) {
      auto r = verify(n, phi, t);
      if (r.verdict != Outcome::Holds) continue;
      // A violating pointed graph with at most 3 vertices would refute Holds.
      const Formula phi_n = gnn_to_ksharp(n);
      const Formula bad = t == Task::NSubPhi ? conj(phi_n, neg(phi)) : conj(phi, neg(phi_n));
      EXPECT_FALSE(sat::bruteforce_sat(bad, 3, 2).has_value()) << print_formula(phi);
    }
  }
}

TEST(Verify, Deterministic) {
  const GnnModel n = p_detector();
  auto a = verify(n, parse_formula("q"), Task::Equiv);
  auto b = verify(n, parse_formula("q"), Task::Equiv);
  a.seconds = b.seconds = 0;
  EXPECT_EQ(report_to_json(a, n), report_to_json(b, n));
}

TEST(KSharpToGnn, AgreesWithModelChecking) {
  std::mt19937_64 rng(3);
  RandomFormulaConfig cfg;
  cfg.props = {"x1", "x2"};
  cfg.counting = true;
  cfg.indicators = true;
  cfg.max_size = 10;
  for (int i = 0; i < 40; ++i) {
    const Formula f = random_formula(cfg, rng);
    const GnnModel n = ksharp_to_gnn(f, {"x1", "x2"});
    LabelledGraph g = random_graph(6, Rational(1, 3), 2, true, 1000 + i);
    auto fw = forward(n, g);
    ModelChecker mc(g);
    for (Vertex u = 0; u < g.size(); ++u) EXPECT_EQ(bool(fw.accept[u]), mc.holds(u, f)) << print_formula(f);
  }
}
