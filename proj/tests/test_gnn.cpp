#include <gtest/gtest.h>

#include <random>

#include "gnnv/errors.hpp"
#include "gnnv/formula_gen.hpp"
#include "gnnv/formula_io.hpp"
#include "gnnv/gnn.hpp"
#include "gnnv/gnn_expr.hpp"
#include "gnnv/model_check.hpp"

using namespace gnnv;

namespace {

GnnModel one_layer(const std::string& readout) {
  return parse_gnn(R"({"input_dim": 1, "activation": "truncReLU",
    "layers": [{"A": [[1]], "B": [[0]], "b": [0]}], "readout": )" + readout + "}");
}

// The worked two-layer model; readout 2 N[1] + 3 N[2] >= 1.
GnnModel worked_model() {
  return parse_gnn(R"({"input_dim": 2, "activation": "truncReLU", "layers": [
    {"A": [[2, 1], [-1, 4]], "B": [[5, 3], [2, 6]], "b": [1, -2]},
    {"A": [[3, 0], [-2, 0]], "B": [[-1, 0], [0, 5]], "b": [0, 0]}],
    "readout": {"w": [2, 3], "b": -1}})");
}

Rational direct_eval(const LabelledGraph& g, Vertex u, const GnnExpr& e) {
  switch (e->kind) {
    case GnnExprKind::Const: return e->value;
    case GnnExprKind::Feature: return g.label(u)[e->feature];
    case GnnExprKind::Act: return truncrelu(direct_eval(g, u, e->a));
    case GnnExprKind::Agg: {
      Rational s = 0;
      for (Vertex v : g.successors(u)) s += direct_eval(g, v, e->a);
      return s;
    }
    case GnnExprKind::Sum: return direct_eval(g, u, e->a) + direct_eval(g, u, e->b);
    case GnnExprKind::Scale: return e->value * direct_eval(g, u, e->a);
  }
  return 0;
}

}  // namespace

TEST(ParseGnn, Examples) {
  auto n = one_layer(R"({"w": [1], "b": 0})");
  EXPECT_EQ(n.layers.size(), 1u);
  EXPECT_THROW(parse_gnn(R"({"input_dim": 1, "activation": "truncReLU",
    "layers": [{"A": [[1, 0], [0, 1]], "B": [[0, 0], [0, 0]], "b": [0, 0]}], "readout": {"w": [1, 1], "b": 0}})"),
               InputError);
  try {
    parse_gnn(R"({"input_dim": 1, "activation": "ReLU", "layers": [], "readout": {"w": [1], "b": 0}})");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("unsupported activation"), std::string::npos);
  }
}

TEST(ParseGnn, RoundTrip) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto n = random_gnn(2, {3, 2}, 2, seed);
    auto m = parse_gnn(print_gnn(n));
    EXPECT_EQ(print_gnn(m), print_gnn(n));
  }
}

TEST(TruncRelu, Examples) {
  EXPECT_EQ(truncrelu(Rational(-1, 2)), 0);
  EXPECT_EQ(truncrelu(Rational(1, 2)), Rational(1, 2));
  EXPECT_EQ(truncrelu(Rational(7, 3)), 1);
}

TEST(Forward, Examples) {
  auto g = random_graph(6, Rational(1, 3), 1, true, 3);
  auto zero = parse_gnn(R"({"input_dim": 1, "activation": "truncReLU",
    "layers": [{"A": [[0]], "B": [[0]], "b": [0]}], "readout": {"w": [0], "b": 0}})");
  auto fz = forward(zero, g);
  for (Vertex u = 0; u < g.size(); ++u) {
    EXPECT_EQ(fz.layers[1][u][0], 0);
    EXPECT_TRUE(fz.accept[u]);
  }
  auto reject = one_layer(R"({"w": [0], "b": -1})");
  for (bool a : forward(reject, g).accept) EXPECT_FALSE(a);
  auto detector = one_layer(R"({"w": [1], "b": -1})");
  auto fd = forward(detector, g);
  for (Vertex u = 0; u < g.size(); ++u) EXPECT_EQ(bool(fd.accept[u]), g.label(u)[0] == 1);
  EXPECT_THROW(forward(detector, random_graph(3, 0, 2, true, 1)), InputError);
}

TEST(GnnExpr, Evaluation) {
  LabelledGraph sink(1, 1, {{1}}, {});
  EXPECT_EQ(eval_gnn_expr(sink, 0, gagg(gact(gfeature(0)))), 0);
  EXPECT_EQ(eval_gnn_expr(sink, 0, gconst(Rational(5, 3))), Rational(5, 3));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto g = random_graph(5, Rational(1, 2), 2, false, seed);
    const GnnExpr e = gsum(gscale(Rational(3, 2), gagg(gact(gsum(gfeature(0), gfeature(1))))),
                           gscale(Rational(-2), gact(gsum(gfeature(1), gconst(Rational(1, 3))))));
    for (Vertex u = 0; u < g.size(); ++u) EXPECT_EQ(eval_gnn_expr(g, u, e), direct_eval(g, u, e));
  }
  EXPECT_TRUE(well_formed_for_translation(gagg(gact(gfeature(0)))));
  EXPECT_FALSE(well_formed_for_translation(gagg(gscale(2, gfeature(0)))));
}

TEST(GnnToExpr, ZeroModelIsConstantOne) {
  auto zero = parse_gnn(R"({"input_dim": 1, "activation": "truncReLU",
    "layers": [{"A": [[0]], "B": [[0]], "b": [0]}], "readout": {"w": [0], "b": 0}})");
  const GnnExpr e = gnn_to_expr(zero);
  auto g = random_graph(4, Rational(1, 2), 1, true, 2);
  for (Vertex u = 0; u < g.size(); ++u) EXPECT_EQ(eval_gnn_expr(g, u, e), 1);
}

TEST(GnnToExpr, WorkedModel) {
  const GnnModel n = worked_model();
  const GnnExpr e = gnn_to_expr(n);
  EXPECT_TRUE(well_formed_for_translation(e));
  const std::string text = print_gnn_expr(e);
  EXPECT_NE(text.find("trunc(-x1 + 4*x2 + 2*agg(trunc(x1)) + 6*agg(trunc(x2)) - 2)"), std::string::npos) << text;
  EXPECT_NE(text.find("trunc(2*x1 + x2 + 5*agg(trunc(x1)) + 3*agg(trunc(x2)) + 1)"), std::string::npos) << text;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto g = random_graph(6, Rational(1, 3), 2, true, seed);
    auto fw = forward(n, g);
    for (Vertex u = 0; u < g.size(); ++u) EXPECT_EQ(bool(fw.accept[u]), eval_gnn_expr(g, u, e) >= 1);
  }
}

TEST(GnnToExpr, RandomModelsAgreeWithForward) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto n = random_gnn(2, {2, 2}, 1 + seed % 3, seed);
    const GnnExpr e = gnn_to_expr(n);
    auto g = random_graph(5, Rational(1, 3), 2, true, seed + 77);
    auto fw = forward(n, g);
    for (Vertex u = 0; u < g.size(); ++u) EXPECT_EQ(bool(fw.accept[u]), eval_gnn_expr(g, u, e) >= 1);
  }
}

TEST(Tr, TableEntries) {
  const std::vector<std::string> names{"p", "q"};
  EXPECT_EQ(print_gnn_expr(tr(neg(prop("p")), names), names), "1 - trunc(p)");
  EXPECT_EQ(print_gnn_expr(tr(conj(prop("p"), prop("q")), names), names), "trunc(p + q - 1)");
  EXPECT_THROW(tr(parse_formula("#g(p) >= 1"), names), InputError);
}

TEST(Tr, ZeroOneValuedAndEquivalent) {
  std::mt19937_64 rng(21);
  RandomFormulaConfig cfg;
  cfg.props = {"x1", "x2", "x3"};
  cfg.max_modal_depth = 3;
  cfg.max_size = 10;
  cfg.counting = true;
  cfg.indicators = true;
  const std::vector<std::string> names{"x1", "x2", "x3"};
  for (int i = 0; i < 60; ++i) {
    const Formula f = random_formula(cfg, rng);
    const GnnExpr e = tr(f, names);
    auto g = random_graph(1 + i % 7, Rational(1, 3), 3, true, i);
    ModelChecker mc(g);
    for (Vertex u = 0; u < g.size(); ++u) {
      const Rational v = eval_gnn_expr(g, u, e);
      EXPECT_TRUE(v == 0 || v == 1);
      EXPECT_EQ(v == 1, mc.holds(u, f)) << print_formula(f);
    }
  }
}

TEST(TrPrime, Examples) {
  const std::vector<std::string> names{"p"};
  EXPECT_EQ(tr_prime(gagg(gact(gfeature(0))), names), LinExpr::atom(AtomKind::Count, prop("p")));
  EXPECT_EQ(tr_prime(gact(gconst(2)), names), LinExpr(BigInt(1)));
  EXPECT_THROW(tr_prime(gscale(Rational(1, 2), gfeature(0)), names), InputError);
  EXPECT_THROW(tr_prime(gagg(gfeature(0)), names), InputError);
}

TEST(TrPrime, ValueEqualityOnIntegerModels) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto n = random_gnn(2, {2, 2}, 1, seed);
    const auto names = n.prop_names();
    const GnnExpr e = gnn_to_expr(n);
    const LinExpr xi = tr_prime(e, names);
    auto g = random_graph(5, Rational(1, 3), 2, true, seed + 9);
    ModelChecker mc(g);
    for (Vertex u = 0; u < g.size(); ++u) EXPECT_EQ(Rational(mc.eval_lin(u, xi)), eval_gnn_expr(g, u, e));
  }
}

TEST(TrPrimeScaled, HalfIntegerModels) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    auto n = random_gnn(2, {2, 1}, 2, seed);
    const auto names = n.prop_names();
    const GnnExpr e = gnn_to_expr(n);
    const BigInt m = common_denominator(n);
    const Formula phi = tr_prime_scaled(e, m, names);
    for (std::uint64_t gs = 0; gs < 4; ++gs) {
      auto g = random_graph(1 + gs, Rational(1, 2), 2, true, seed * 10 + gs);
      auto fw = forward(n, g);
      ModelChecker mc(g);
      for (Vertex u = 0; u < g.size(); ++u) EXPECT_EQ(bool(fw.accept[u]), mc.holds(u, phi));
    }
  }
}

TEST(TrPrimeScaled, ScalingIdentity) {
  // The top level is represented exactly at scale M^depth.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto n = random_gnn(1, {1, 1}, 2, seed);
    const auto names = n.prop_names();
    const GnnExpr e = gnn_to_expr(n);
    const BigInt m = common_denominator(n);
    BigInt scale = 1;
    for (std::size_t t = 0; t < act_depth(e); ++t) scale *= m;
    const LinExpr xi = tr_prime_at_scale(e, m, scale, names);
    auto g = random_graph(4, Rational(1, 2), 1, true, seed);
    ModelChecker mc(g);
    for (Vertex u = 0; u < g.size(); ++u) EXPECT_EQ(Rational(mc.eval_lin(u, xi)), Rational(scale) * eval_gnn_expr(g, u, e));
  }
}

TEST(TrPrimeScaled, DenominatorCap) {
  auto n = random_gnn(1, {1}, 17, 1);
  if (common_denominator(n) > kMaxCommonDenominator) {
    EXPECT_THROW(tr_prime_scaled(gnn_to_expr(n), common_denominator(n), n.prop_names()), LimitExceeded);
  }
  EXPECT_THROW(tr_prime_scaled(gact(gscale(Rational(1, 17), gfeature(0))), 17, std::vector<std::string>{"x1"}),
               LimitExceeded);
}
