#pragma once

#include <unordered_map>
#include <vector>

#include "gnnv/formula.hpp"
#include "gnnv/graph.hpp"

namespace gnnv {

/// Evaluates K# formulas (including #g) on a Boolean graph. Truth vectors are
/// computed for all vertices at once and memoised per subformula, so a
/// checker can answer many queries on the same graph in O(|f| (n + m)).
/// Propositions absent from the graph are false everywhere.
class ModelChecker {
 public:
  /// Throws InputError if the graph is not Boolean.
  explicit ModelChecker(const LabelledGraph& g);

  bool holds(Vertex u, Formula f);
  const std::vector<char>& truth(Formula f);
  BigInt eval_lin(Vertex u, const LinExpr& xi);

 private:
  BigInt atom_value(Vertex u, const LinTerm& t);
  const BigInt& global_count(Formula f);

  const LabelledGraph& g_;
  std::unordered_map<Formula, std::vector<char>> memo_;
  std::unordered_map<Formula, BigInt> global_;
};

bool model_check(const LabelledGraph& g, Vertex u, Formula f);
BigInt eval_lin(const LabelledGraph& g, Vertex u, const LinExpr& xi);

}  // namespace gnnv
