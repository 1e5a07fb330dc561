#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include "gnnv/errors.hpp"
#include "gnnv/qfbapa.hpp"
#include "gnnv/qfpa.hpp"

using namespace gnnv;
using namespace gnnv::arith;

namespace {

QfbapaFormula Q(const char* s) { return parse_qfbapa(s); }

RegionCode code(const std::string& bits) {
  RegionCode r;
  for (char c : bits) r.push_back(c == '1');
  return r;
}

// Region variables on the right-hand side of the i-th k definition.
std::set<std::string> regions_of_term(const NaiveReduction& nr, std::size_t i) {
  std::set<std::string> out;
  const QfpaFormula& def = nr.problem.formula.children.at(i);
  for (const auto& [var, coeff] : def.children.at(0).atom.terms) {
    if (var >= nr.first_region && coeff != 0) out.insert(nr.problem.var_names[var]);
  }
  return out;
}

bool is_card_zero(const QfbapaFormula& f) {
  return f->kind == QfbapaNode::Kind::IntEq && f->e1->kind == IntExprNode::Kind::Card &&
         f->e2->kind == IntExprNode::Kind::Const && f->e2->value == 0;
}

}  // namespace

TEST(QfbapaParse, Examples) {
  EXPECT_NO_THROW(Q("|S| = 2"));
  EXPECT_NO_THROW(Q("(S cup T) sub U"));
  auto f = Q("|pianist cap student| + x >= 5 and (|pianist| <= 10 or |student| <= 10)");
  EXPECT_EQ(set_variables(f), (std::vector<std::string>{"pianist", "student"}));
  EXPECT_EQ(int_variables(f), (std::vector<std::string>{"x"}));
  EXPECT_EQ(cardinality_terms(f).size(), 3u);
}

TEST(QfbapaParse, RoundTrip) {
  for (const char* s : {"|S| = 2", "(S cup T) sub U", "not (|S cap comp T| >= 3) or x + 2 * y <= |empty|",
                        "|U| = 0 and true", "S = T"}) {
    auto f = Q(s);
    EXPECT_EQ(print_qfbapa(Q(print_qfbapa(f).c_str())), print_qfbapa(f)) << s;
  }
}

TEST(QfbapaParse, Errors) {
  EXPECT_THROW(Q("|S| = "), InputError);
  EXPECT_THROW(Q("S cup"), InputError);
  EXPECT_THROW(Q("|S| == 2"), InputError);
  EXPECT_THROW(Q("(|S| = 2"), InputError);
}

TEST(EliminateSetAtoms, EqualityBecomesTwoInclusions) {
  auto g = eliminate_set_atoms(Q("S = T"));
  ASSERT_EQ(g->kind, QfbapaNode::Kind::And);
  EXPECT_TRUE(is_card_zero(g->a));
  EXPECT_TRUE(is_card_zero(g->b));
  EXPECT_EQ(print_set(g->a->e1->set), print_set(set_inter(set_var("S"), set_comp(set_var("T")))));
  EXPECT_EQ(print_set(g->b->e1->set), print_set(set_inter(set_var("T"), set_comp(set_var("S")))));
}

TEST(EliminateSetAtoms, InclusionCases) {
  auto g = eliminate_set_atoms(Q("S sub S"));
  ASSERT_TRUE(is_card_zero(g));
  QfbapaModel m{{"S"}, {{code("1"), 3}, {code("0"), 2}}, {}};
  EXPECT_TRUE(check_model(g, m));

  auto h = eliminate_set_atoms(Q("empty sub T"));
  ASSERT_TRUE(is_card_zero(h));
  EXPECT_EQ(h->e1->set->a->kind, SetExprNode::Kind::Empty);
}

TEST(EliminateSetAtoms, PreservesSemantics) {
  std::mt19937_64 rng(11);
  RandomQfbapaConfig cfg;
  cfg.set_atom_rate = 0.5;
  for (int it = 0; it < 200; ++it) {
    auto f = random_qfbapa(cfg, rng);
    auto g = eliminate_set_atoms(f);
    QfbapaModel m;
    m.set_vars = {"S1", "S2", "S3"};
    for (std::size_t idx = 0; idx < 8; ++idx) {
      long size = std::uniform_int_distribution<long>(0, 2)(rng);
      if (size > 0) m.regions[{bool(idx & 1), bool(idx & 2), bool(idx & 4)}] = size;
    }
    m.ints["x"] = std::uniform_int_distribution<long>(-5, 5)(rng);
    EXPECT_EQ(check_model(f, m), check_model(g, m)) << print_qfbapa(f);
  }
}

TEST(RegionModels, Examples) {
  std::vector<std::string> vars{"S1", "S2", "S3", "S4", "S5", "S6"};
  EXPECT_TRUE(region_models(code("101001"), set_inter(set_var("S1"), set_var("S3")), vars));
  EXPECT_FALSE(region_models(code("101001"), set_inter(set_var("S1"), set_var("S2")), vars));
  for (std::size_t idx = 0; idx < 64; ++idx) {
    RegionCode rho;
    for (int i = 0; i < 6; ++i) rho.push_back((idx >> i) & 1U);
    EXPECT_TRUE(region_models(rho, set_universe(), vars));
    EXPECT_FALSE(region_models(rho, set_empty(), vars));
    auto b = set_union(set_var("S2"), set_inter(set_var("S4"), set_comp(set_var("S6"))));
    EXPECT_NE(region_models(rho, set_comp(b), vars), region_models(rho, b, vars));
  }
}

TEST(NaiveReduction, IntersectionRegions) {
  auto nr = naive_reduction(Q("|S1 cap S2| >= 0 and |S3| >= 0"));
  ASSERT_EQ(nr.set_vars, (std::vector<std::string>{"S1", "S2", "S3"}));
  EXPECT_EQ(nr.problem.var_count() - nr.first_region, 8u);
  EXPECT_EQ(regions_of_term(nr, 0), (std::set<std::string>{"s_110", "s_111"}));
}

TEST(NaiveReduction, ComplementRegions) {
  auto nr = naive_reduction(Q("|comp S1| >= 0 and |S2 cup S3| >= 0"));
  EXPECT_EQ(regions_of_term(nr, 0), (std::set<std::string>{"s_000", "s_001", "s_010", "s_011"}));
}

TEST(NaiveReduction, WorkedExampleShape) {
  auto nr = naive_reduction(Q("(|S cap T| <= 5) and (|S| > |T|)"));
  EXPECT_EQ(nr.terms.size(), 3u);
  EXPECT_EQ(nr.set_vars.size(), 2u);
  EXPECT_EQ(nr.problem.var_count() - nr.first_region, 4u);
  for (std::size_t v = nr.first_region; v < nr.problem.var_count(); ++v) EXPECT_TRUE(nr.problem.nonneg[v]);
}

TEST(NaiveReduction, Guard) {
  std::string s = "|S1";
  for (int i = 2; i <= 13; ++i) s += " cup S" + std::to_string(i);
  s += "| >= 1";
  EXPECT_THROW(naive_reduction(Q(s.c_str())), LimitExceeded);
}

TEST(Qfpa, Examples) {
  {
    QfpaProblem p;
    auto x = p.add_var("x", false);
    LinearConstraint ge, le;
    ge.add(x, 1).constant = -1;
    le.add(x, -1);
    p.formula = QfpaFormula::all({QfpaFormula::of(ge), QfpaFormula::of(le)});
    EXPECT_EQ(qfpa_sat(p).verdict, Verdict::Unsat);
  }
  {
    QfpaProblem p;
    auto x = p.add_var("x", false);
    LinearConstraint c;
    c.add(x, 2).constant = -3;
    p.formula = QfpaFormula::equal(c);
    EXPECT_EQ(qfpa_sat(p).verdict, Verdict::Unsat);
    EXPECT_TRUE(lp_feasible(1, p.nonneg, {p.formula.children[0].atom, p.formula.children[1].atom}));
  }
  {
    QfpaProblem p;
    auto x = p.add_var("x", false), y = p.add_var("y", false);
    LinearConstraint a, b;
    a.add(x, 1).add(y, 1).constant = -3;
    b.add(x, 1).add(y, -1).constant = -1;
    p.formula = QfpaFormula::all({QfpaFormula::equal(a), QfpaFormula::equal(b)});
    auto r = qfpa_sat(p);
    ASSERT_EQ(r.verdict, Verdict::Sat);
    EXPECT_EQ(r.assignment, (std::vector<BigInt>{2, 1}));
  }
}

TEST(Qfpa, DisjunctionAndEmptyConnectives) {
  QfpaProblem p;
  auto x = p.add_var("x", true);
  LinearConstraint big, neg;
  big.add(x, 1).constant = -7;  // x >= 7
  neg.add(x, -1).constant = -1;  // x <= -1
  p.formula = QfpaFormula::any({QfpaFormula::of(neg), QfpaFormula::of(big)});
  auto r = qfpa_sat(p);
  ASSERT_EQ(r.verdict, Verdict::Sat);
  EXPECT_GE(r.assignment[0], 7);
  p.formula = QfpaFormula::falsity();
  EXPECT_EQ(qfpa_sat(p).verdict, Verdict::Unsat);
  p.formula = QfpaFormula::truth();
  EXPECT_EQ(qfpa_sat(p).verdict, Verdict::Sat);
}

TEST(Qfpa, CapGivesUnknownNotUnsat) {
  // Every solution of 3x - 5y = 1 with x >= 100 lies outside the cap.
  QfpaProblem p;
  auto x = p.add_var("x", false), y = p.add_var("y", false);
  LinearConstraint c;
  c.add(x, 3).add(y, -5).constant = -1;
  LinearConstraint lo;
  lo.add(x, 1).constant = -100;
  p.formula = QfpaFormula::all({QfpaFormula::equal(c), QfpaFormula::of(lo)});
  QfpaOptions opts;
  opts.magnitude_cap = 50;
  auto r = qfpa_sat(p, opts);
  EXPECT_NE(r.verdict, Verdict::Unsat);
  auto full = qfpa_sat(p);
  ASSERT_EQ(full.verdict, Verdict::Sat);
  EXPECT_TRUE(p.formula.eval(full.assignment));
}

TEST(Qfpa, RandomSatAssignmentsHold) {
  std::mt19937_64 rng(5);
  auto u = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
  for (int it = 0; it < 200; ++it) {
    QfpaProblem p;
    const std::size_t n = static_cast<std::size_t>(u(1, 3));
    for (std::size_t i = 0; i < n; ++i) p.add_var("v" + std::to_string(i), u(0, 1) == 1);
    std::vector<QfpaFormula> conj;
    for (int k = 0; k < 3; ++k) {
      std::vector<QfpaFormula> disj;
      for (int j = 0; j < 2; ++j) {
        LinearConstraint c;
        for (std::size_t i = 0; i < n; ++i) c.add(i, u(-3, 3));
        c.constant = u(-6, 6);
        disj.push_back(QfpaFormula::of(c));
      }
      conj.push_back(QfpaFormula::any(disj));
    }
    p.formula = QfpaFormula::all(conj);
    auto r = qfpa_sat(p);
    // Exhaustive check over a box that contains a witness whenever one exists
    // for these small coefficient ranges.
    bool found = false;
    std::vector<BigInt> x(n);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (found) return;
      if (i == n) {
        found = p.formula.eval(x);
        return;
      }
      for (long v = p.nonneg[i] ? 0 : -20; v <= 20 && !found; ++v) {
        x[i] = v;
        rec(i + 1);
      }
    };
    rec(0);
    if (r.verdict == Verdict::Sat) EXPECT_TRUE(p.formula.eval(r.assignment));
    if (found) EXPECT_EQ(r.verdict, Verdict::Sat);
    if (r.verdict == Verdict::Unsat) EXPECT_FALSE(found);
  }
}

TEST(QfbapaSat, Examples) {
  auto pianists = Q("|pianist cap student| + x >= 5 and (|pianist| <= 10 or |student| <= 10)");
  auto r = qfbapa_sat(pianists);
  ASSERT_EQ(r.verdict, Verdict::Sat);
  EXPECT_TRUE(check_model(pianists, r.model));
  QfbapaModel empty_sets{{"pianist", "student"}, {}, {{"x", 5}}};
  EXPECT_TRUE(check_model(pianists, empty_sets));
  EXPECT_EQ(qfbapa_sat_naive(pianists).verdict, Verdict::Sat);

  EXPECT_EQ(qfbapa_sat(Q("|U| <= -1")).verdict, Verdict::Unsat);
  EXPECT_EQ(qfbapa_sat(Q("|S| = 2 and |S cap comp S| >= 1")).verdict, Verdict::Unsat);
  EXPECT_EQ(qfbapa_sat_naive(Q("|S| = 2 and |S cap comp S| >= 1")).verdict, Verdict::Unsat);
}

TEST(QfbapaSat, RegionArithmetic) {
  EXPECT_EQ(qfbapa_sat(Q("|S| = 3 and |T| = 3 and |S cup T| = 4 and |S cap T| <= 1")).verdict, Verdict::Unsat);
  auto f = Q("|S| = 3 and |T| = 3 and |S cup T| = 4 and |S cap T| = 2");
  auto r = qfbapa_sat(f);
  ASSERT_EQ(r.verdict, Verdict::Sat);
  EXPECT_EQ(r.model.domain_size(), 4);
  EXPECT_EQ(qfbapa_sat(Q("S sub T and T sub S and |S cap comp T| + |T| >= 1 and |S| = 0")).verdict,
            Verdict::Unsat);
}

TEST(QfbapaSat, LargeConstantsStayExact) {
  auto f = Q("|S| = 1000000000000 and |S cap T| = 999999999999");
  auto r = qfbapa_sat(f);
  ASSERT_EQ(r.verdict, Verdict::Sat);
  EXPECT_TRUE(check_model(f, r.model));
}

TEST(CheckModel, EmptyDomain) {
  QfbapaModel empty;
  EXPECT_TRUE(check_model(Q("|U| = 0"), empty));
  EXPECT_FALSE(check_model(Q("|U| >= 1"), empty));
  EXPECT_EQ(empty.domain_size(), 0);
}

TEST(QfbapaSat, AgreesWithNaiveReduction) {
  std::mt19937_64 rng(2024);
  RandomQfbapaConfig cfg;
  std::size_t sat = 0, unsat = 0;
  for (int it = 0; it < 150; ++it) {
    cfg.set_vars = 1 + it % 4;
    auto f = random_qfbapa(cfg, rng);
    auto fast = qfbapa_sat(f);
    auto slow = qfbapa_sat_naive(f);
    ASSERT_NE(fast.verdict, Verdict::Unknown) << print_qfbapa(f);
    EXPECT_EQ(fast.verdict, slow.verdict) << print_qfbapa(f);
    if (fast.verdict == Verdict::Sat) {
      ++sat;
      EXPECT_TRUE(check_model(f, fast.model));
      EXPECT_LE(fast.support, std::max<std::size_t>(fast.n_max, 1));
    } else {
      ++unsat;
    }
  }
  EXPECT_GT(sat, 20u);
  EXPECT_GT(unsat, 5u);
}

TEST(Caratheodory, BoundValues) {
  EXPECT_EQ(caratheodory_bound(0), 0u);
  EXPECT_EQ(caratheodory_bound(1), 4u);   // 2 log2 4
  EXPECT_EQ(caratheodory_bound(2), 12u);  // 4 log2 8
  EXPECT_EQ(caratheodory_bound(3), 22u);  // ceil(6 log2 12) = ceil(21.51)
  EXPECT_EQ(caratheodory_bound(4), 32u);
  EXPECT_EQ(caratheodory_bound(2, 2), 16u);
}

TEST(ReduceSupport, KeepsSumAndShrinks) {
  std::mt19937_64 rng(9);
  for (int it = 0; it < 100; ++it) {
    const std::size_t d = 1 + it % 4;
    std::vector<std::vector<long>> vecs;
    std::vector<BigInt> mult;
    for (std::size_t idx = 1; idx < (std::size_t{1} << d); ++idx) {
      if (std::bernoulli_distribution(0.7)(rng)) {
        std::vector<long> v(d);
        for (std::size_t i = 0; i < d; ++i) v[i] = (idx >> i) & 1U;
        vecs.push_back(v);
        mult.push_back(std::uniform_int_distribution<long>(0, 5)(rng));
      }
    }
    auto sum = [&](const std::vector<BigInt>& m) {
      std::vector<BigInt> s(d, 0);
      for (std::size_t j = 0; j < vecs.size(); ++j)
        for (std::size_t i = 0; i < d; ++i) s[i] += m[j] * vecs[j][i];
      return s;
    };
    auto reduced = reduce_support(vecs, mult);
    EXPECT_EQ(sum(reduced), sum(mult));
    std::size_t before = 0, after = 0;
    for (std::size_t j = 0; j < mult.size(); ++j) {
      EXPECT_GE(reduced[j], 0);
      before += mult[j] > 0;
      after += reduced[j] > 0;
    }
    EXPECT_LE(after, before);
    EXPECT_LE(after, caratheodory_bound(d));
  }
}
