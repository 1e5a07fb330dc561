#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "gnnv/numeric.hpp"

namespace gnnv {

enum class FormulaKind : std::uint8_t { Prop, Not, And, Or, LinGe };

/// Atoms of linear expressions: 1_phi, #phi (successors) and #g phi (whole graph).
enum class AtomKind : std::uint8_t { Ind, Count, GCount };

struct FormulaNode;
class LinExpr;

/// Handle to a hash-consed K# formula. Two handles are equal iff the formulas
/// are structurally equal. Nodes live for the whole process; interning is
/// guarded by a mutex so formulas may be built from several threads.
class Formula {
 public:
  FormulaKind kind() const;
  std::uint32_t id() const;

  const std::string& prop_name() const;  // Prop
  Formula operand() const;               // Not
  Formula left() const;                  // And, Or
  Formula right() const;                 // And, Or
  const LinExpr& lin() const;            // LinGe: lin() >= 0

  /// Cached modal depth. Count and GCount atoms add one level, Ind adds none.
  std::size_t modal_depth() const;

  friend bool operator==(Formula a, Formula b) { return a.node_ == b.node_; }
  friend std::strong_ordering operator<=>(Formula a, Formula b) { return a.id() <=> b.id(); }

 private:
  friend class FormulaFactory;
  explicit Formula(const FormulaNode* node) : node_(node) {}
  const FormulaNode* node_;
};

struct LinTerm {
  BigInt coeff;
  AtomKind kind;
  Formula arg;

  friend bool operator==(const LinTerm&, const LinTerm&) = default;
};

/// constant + sum of coeff * atom with integer coefficients. Terms are kept
/// sorted by (kind, arg id), merged, and free of zero coefficients.
class LinExpr {
 public:
  LinExpr() = default;
  explicit LinExpr(BigInt constant) : constant_(std::move(constant)) {}
  static LinExpr atom(AtomKind kind, Formula arg, BigInt coeff = 1);

  const BigInt& constant() const { return constant_; }
  const std::vector<LinTerm>& terms() const { return terms_; }
  bool is_constant() const { return terms_.empty(); }

  void add_term(const BigInt& coeff, AtomKind kind, Formula arg);
  LinExpr& operator+=(const LinExpr& other);
  LinExpr& operator-=(const LinExpr& other);
  LinExpr& operator+=(const BigInt& c);
  LinExpr& operator-=(const BigInt& c);
  LinExpr& operator*=(const BigInt& c);

  friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
  friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
  friend LinExpr operator+(LinExpr a, const BigInt& c) { return a += c; }
  friend LinExpr operator-(LinExpr a, const BigInt& c) { return a -= c; }
  friend LinExpr operator*(const BigInt& c, LinExpr a) { return a *= c; }
  LinExpr operator-() const;

  friend bool operator==(const LinExpr&, const LinExpr&) = default;

 private:
  BigInt constant_ = 0;
  std::vector<LinTerm> terms_;
};

// Core constructors. neg() builds a raw negation node; use nnf() to push it down.
Formula prop(const std::string& name);
Formula neg(Formula f);
Formula conj(Formula a, Formula b);
Formula disj(Formula a, Formula b);
/// Left-nested; the empty conjunction is top(), the empty disjunction bottom().
Formula conj(std::span<const Formula> fs);
Formula disj(std::span<const Formula> fs);
Formula lin_ge(LinExpr xi);

// Sugar. Each desugars immediately into the core constructors.
Formula top();     // 0 >= 0
Formula bottom();  // -1 >= 0
Formula implies(Formula a, Formula b);
Formula iff(Formula a, Formula b);
Formula diamond(Formula f);                            // #f >= 1
Formula box(Formula f);                                // #(nnf ~f) <= 0
Formula graded_diamond(const BigInt& k, Formula f);    // #f >= k
Formula exactly_diamond(const BigInt& k, Formula f);   // #f >= k & #f <= k
Formula global_box(Formula f);                         // #g f >= #g true
Formula compare(LinExpr lhs, const std::string& op, LinExpr rhs);

/// Negation normal form: Not only above Prop; negated linear atoms use
/// integer semantics, ~(xi >= 0) becomes -xi - 1 >= 0. Arguments of atoms are
/// normalised as well.
Formula nnf(Formula f);
bool is_nnf(Formula f);

std::size_t modal_depth(Formula f);
/// Number of nodes of the formula unfolded as a tree (saturates at SIZE_MAX).
std::size_t formula_size(Formula f);

std::set<std::string> collect_props(Formula f);
bool contains_atom(Formula f, AtomKind kind);

/// Standard translation of a pure modal formula into first-order logic with
/// variables x and y reused alternately. Throws InputError on graded or
/// linear constructs.
std::string standard_translation_fo(Formula f);

/// Recognised shape of a linear atom that is plain modal logic.
enum class ModalShape { True, False, Diamond, Box, Other };
struct ModalView {
  ModalShape shape = ModalShape::Other;
  Formula arg = top();  // Diamond: argument; Box: the boxed formula in NNF
};
ModalView view_as_modal(Formula lin_atom);

}  // namespace gnnv

template <>
struct std::hash<gnnv::Formula> {
  std::size_t operator()(gnnv::Formula f) const noexcept { return f.id(); }
};
