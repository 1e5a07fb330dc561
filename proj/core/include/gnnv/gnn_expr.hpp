#pragma once

#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "gnnv/formula.hpp"
#include "gnnv/gnn.hpp"
#include "gnnv/graph.hpp"

namespace gnnv {

enum class GnnExprKind { Const, Feature, Act, Agg, Sum, Scale };

struct GnnExprNode;
/// Immutable expression DAG; subexpressions may be shared.
using GnnExpr = std::shared_ptr<const GnnExprNode>;

struct GnnExprNode {
  GnnExprKind kind;
  Rational value;         // Const value or Scale factor
  std::size_t feature = 0;
  GnnExpr a;              // Act, Agg, Scale child; Sum left
  GnnExpr b;              // Sum right
};

GnnExpr gconst(Rational c);
GnnExpr gfeature(std::size_t i);
GnnExpr gact(GnnExpr e);
GnnExpr gagg(GnnExpr e);
GnnExpr gsum(GnnExpr a, GnnExpr b);
GnnExpr gscale(Rational c, GnnExpr e);

/// Every Agg child is an Act node.
bool well_formed_for_translation(const GnnExpr& e);
/// Nesting depth of Act nodes (Agg(Act x) counts the Act once).
std::size_t act_depth(const GnnExpr& e);

/// Features print with the given names, or x1..xd when names is empty.
std::string print_gnn_expr(const GnnExpr& e, std::span<const std::string> names = {});

/// Evaluates an expression on every vertex, memoising shared subexpressions.
class GnnExprEvaluator {
 public:
  explicit GnnExprEvaluator(const LabelledGraph& g) : g_(g) {}
  const std::vector<Rational>& values(const GnnExpr& e);

 private:
  const LabelledGraph& g_;
  std::unordered_map<const GnnExprNode*, std::vector<Rational>> memo_;
  std::vector<GnnExpr> keep_alive_;
};

Rational eval_gnn_expr(const LabelledGraph& g, Vertex u, const GnnExpr& e);

/// Expression whose value is >= 1 exactly where the model accepts, on graphs
/// with 0/1 features. Layer t coordinate i becomes
/// Act(sum_j A_ij psi_j + sum_j B_ij Agg(psi'_j) + b_i), where psi'_j is psi_j
/// except on the input layer, where Act(x_j) keeps the result well formed.
/// The result is s (w . psi_L + b) + 1 with s clearing the readout's
/// denominators.
GnnExpr gnn_to_expr(const GnnModel& n);

/// K# formula to expression with value 1 where f holds and 0 elsewhere.
/// Propositions are looked up in names; unknown ones are constant 0.
GnnExpr tr(Formula f, std::span<const std::string> names);

/// K# expression with the same value as e on every pointed Boolean graph.
/// Needs integer weights and a well-formed expression.
LinExpr tr_prime(const GnnExpr& e, std::span<const std::string> names);

/// K# expression whose value is scale times the value of e, for weights with
/// denominators dividing m. Act nodes at depth t are represented at scale
/// m^t and truncated ReLU is expanded into indicators of the scaled value.
LinExpr tr_prime_at_scale(const GnnExpr& e, const BigInt& m, const BigInt& scale,
                          std::span<const std::string> names);

inline constexpr unsigned kMaxCommonDenominator = 16;
inline constexpr unsigned long kMaxIndicatorTerms = 4096;

/// Formula equivalent to "e >= 1": tr_prime_at_scale(e, m, m^L) >= m^L where L
/// is the Act depth of e.
Formula tr_prime_scaled(const GnnExpr& e, const BigInt& m, std::span<const std::string> names);

/// "xi >= 1" with 1_phi >= 1 simplified to phi and constants folded.
Formula at_least_one(const LinExpr& xi);

}  // namespace gnnv
