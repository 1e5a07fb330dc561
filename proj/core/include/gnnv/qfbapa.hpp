#pragma once

#include <map>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "gnnv/numeric.hpp"
#include "gnnv/qfpa.hpp"

namespace gnnv::arith {

struct SetExprNode;
using SetExpr = std::shared_ptr<const SetExprNode>;
struct SetExprNode {
  enum class Kind { Var, Empty, Universe, Union, Intersection, Complement };
  Kind kind;
  std::string name;
  SetExpr a, b;
};

struct IntExprNode;
using IntExpr = std::shared_ptr<const IntExprNode>;
struct IntExprNode {
  enum class Kind { Var, Const, Add, Mul, Card };
  Kind kind;
  std::string name;
  BigInt value;  // Const value or Mul factor
  IntExpr a, b;  // Add operands; Mul operand in a
  SetExpr set;   // Card
};

struct QfbapaNode;
using QfbapaFormula = std::shared_ptr<const QfbapaNode>;
struct QfbapaNode {
  enum class Kind { SetEq, SetSub, IntEq, IntLe, And, Or, Not, True, False };
  Kind kind;
  SetExpr s1, s2;
  IntExpr e1, e2;
  QfbapaFormula a, b;
};

SetExpr set_var(std::string name);
SetExpr set_empty();
SetExpr set_universe();
SetExpr set_union(SetExpr a, SetExpr b);
SetExpr set_inter(SetExpr a, SetExpr b);
SetExpr set_comp(SetExpr a);

IntExpr int_var(std::string name);
IntExpr int_const(BigInt c);
IntExpr int_add(IntExpr a, IntExpr b);
IntExpr int_mul(BigInt k, IntExpr a);
IntExpr card(SetExpr s);

QfbapaFormula qf_set_eq(SetExpr a, SetExpr b);
QfbapaFormula qf_subset(SetExpr a, SetExpr b);
QfbapaFormula qf_int_eq(IntExpr a, IntExpr b);
QfbapaFormula qf_int_le(IntExpr a, IntExpr b);
QfbapaFormula qf_and(QfbapaFormula a, QfbapaFormula b);
QfbapaFormula qf_or(QfbapaFormula a, QfbapaFormula b);
QfbapaFormula qf_not(QfbapaFormula a);
QfbapaFormula qf_true();
QfbapaFormula qf_false();

/// Grammar: set variables are capitalised identifiers, integer variables are
/// lowercase (any identifier inside |...| is a set). Keywords: cup cap comp U
/// empty sub and or not true false; comparisons = <= >= < >; + - * on
/// integers.
QfbapaFormula parse_qfbapa(std::string_view text);
std::string print_set(const SetExpr& s);
std::string print_int(const IntExpr& e);
std::string print_qfbapa(const QfbapaFormula& f);

/// Rewrites B = B' and B sub B' into cardinality atoms |B cap comp B'| = 0.
QfbapaFormula eliminate_set_atoms(const QfbapaFormula& f);

/// Set and integer variables in order of first occurrence.
std::vector<std::string> set_variables(const QfbapaFormula& f);
std::vector<std::string> int_variables(const QfbapaFormula& f);
/// Distinct set expressions under |...|, deduplicated structurally.
std::vector<SetExpr> cardinality_terms(const QfbapaFormula& f);

using RegionCode = std::vector<bool>;
/// rho |= B where bit i of rho is the membership in vars[i].
bool region_models(const RegionCode& rho, const SetExpr& b, const std::vector<std::string>& vars);

/// Model given by region sizes: every element of region rho belongs exactly to
/// the sets whose bit is 1. Regions not listed are empty.
struct QfbapaModel {
  std::vector<std::string> set_vars;
  std::map<RegionCode, BigInt> regions;
  std::map<std::string, BigInt> ints;

  BigInt domain_size() const;
};

bool check_model(const QfbapaFormula& f, const QfbapaModel& m);

inline constexpr std::size_t kNaiveRegionGuard = 12;

/// Integer problem with one k_i per distinct set expression and one s_rho >= 0
/// per region, equisatisfiable with f. Variables: integer variables of f, then
/// k_1..k_d, then s_rho for rho = 0 .. 2^e - 1 (bit i of the index is the
/// membership in set variable i).
struct NaiveReduction {
  QfpaProblem problem;
  std::vector<std::string> set_vars;
  std::vector<SetExpr> terms;
  std::size_t first_k = 0;
  std::size_t first_region = 0;
};
NaiveReduction naive_reduction(const QfbapaFormula& f);

struct QfbapaResult {
  Verdict verdict = Verdict::Unknown;
  QfbapaModel model;
  std::size_t d = 0;
  std::size_t e = 0;
  std::size_t n_max = 0;
  std::size_t support = 0;  // non-empty regions in the returned model
  std::size_t nodes = 0;
  std::string reason;
};

/// Satisfiability with a reconstructed, independently checked model whose
/// number of non-empty regions is at most ceil(2 d log2(4 d)).
QfbapaResult qfbapa_sat(const QfbapaFormula& f, const QfpaOptions& opts = {});
/// The same question answered through naive_reduction only.
QfbapaResult qfbapa_sat_naive(const QfbapaFormula& f, const QfpaOptions& opts = {});

struct RandomQfbapaConfig {
  std::size_t set_vars = 3;
  std::size_t set_terms = 4;  // pool of cardinality terms
  std::size_t int_vars = 1;
  std::size_t bool_depth = 3;
  long max_coeff = 2;
  long max_constant = 10;
  double set_atom_rate = 0.15;
};

QfbapaFormula random_qfbapa(const RandomQfbapaConfig& cfg, std::mt19937_64& rng);

}  // namespace gnnv::arith
