#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gnnv/numeric.hpp"

namespace gnnv::arith {

enum class Verdict { Sat, Unsat, Unknown };
const char* verdict_name(Verdict v);

/// sum coeff * var + constant >= 0
struct LinearConstraint {
  std::vector<std::pair<std::size_t, BigInt>> terms;
  BigInt constant;

  LinearConstraint& add(std::size_t var, const BigInt& coeff);
  BigInt eval(const std::vector<BigInt>& x) const;
};

/// Negation-free Boolean combination of linear constraints. An empty And is
/// true and an empty Or is false.
struct QfpaFormula {
  enum class Kind { Atom, And, Or };
  Kind kind = Kind::And;
  LinearConstraint atom;
  std::vector<QfpaFormula> children;

  static QfpaFormula truth() { return {Kind::And, {}, {}}; }
  static QfpaFormula falsity() { return {Kind::Or, {}, {}}; }
  static QfpaFormula of(LinearConstraint c) { return {Kind::Atom, std::move(c), {}}; }
  static QfpaFormula all(std::vector<QfpaFormula> fs) { return {Kind::And, {}, std::move(fs)}; }
  static QfpaFormula any(std::vector<QfpaFormula> fs) { return {Kind::Or, {}, std::move(fs)}; }
  /// lhs = rhs as two constraints.
  static QfpaFormula equal(const LinearConstraint& diff);

  bool eval(const std::vector<BigInt>& x) const;
};

struct QfpaProblem {
  std::vector<std::string> var_names;
  std::vector<char> nonneg;
  QfpaFormula formula = QfpaFormula::truth();

  std::size_t add_var(std::string name, bool non_negative);
  std::size_t var_count() const { return var_names.size(); }
};

struct QfpaOptions {
  /// Magnitude cap |x| <= cap used by branch and bound.
  BigInt magnitude_cap = BigInt(1) << 20;
  /// Branch-and-bound and Boolean search nodes before giving up.
  std::size_t node_budget = 200000;
};

struct QfpaResult {
  Verdict verdict = Verdict::Unknown;
  std::vector<BigInt> assignment;
  std::size_t nodes = 0;
  std::string reason;
};

/// Integer satisfiability. Sat assignments are checked exactly; Unsat is
/// reported only when every branch is infeasible even without the magnitude
/// cap, so it is unconditional. Anything else is Unknown.
QfpaResult qfpa_sat(const QfpaProblem& p, const QfpaOptions& opts = {});

/// Exact feasibility of a conjunction over the rationals, no integrality.
bool lp_feasible(std::size_t var_count, const std::vector<char>& nonneg,
                 const std::vector<LinearConstraint>& rows);

/// Shrinks the support of a non-negative integer combination sum_i m_i x_i
/// while keeping the sum: whenever two disjoint support subsets have equal
/// vector sums, mass moves from one to the other until an entry hits zero.
/// Subsets are searched by increasing size within the given budget.
std::vector<BigInt> reduce_support(const std::vector<std::vector<long>>& vectors, std::vector<BigInt> mult,
                                   std::size_t budget = 2000000);

/// Smallest integer N with N >= 2 d log2(4 d m), computed exactly; 0 for d = 0.
std::size_t caratheodory_bound(std::size_t d, std::size_t m = 1);

}  // namespace gnnv::arith
