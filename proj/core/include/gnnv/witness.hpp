#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gnnv/formula.hpp"
#include "gnnv/graph.hpp"

namespace gnnv::sat {

/// A vertex type of a witness: its true propositions and its successors, each
/// with a multiplicity. Nodes form a DAG with the root as a source.
struct WitnessNode {
  std::vector<std::string> props;  // true propositions, sorted
  std::vector<std::pair<std::size_t, BigInt>> children;
};

/// Satisfiability witness. The materialised graph has one vertex per node plus
/// extra copies for multiplicities above one; a copy has the same label and
/// the same successors as the original, so it satisfies the same formulas.
struct Witness {
  std::vector<WitnessNode> nodes;
  std::size_t root = 0;

  /// Vertex count of the materialised graph (saturating).
  BigInt vertex_count() const;
  /// Proposition names in use, sorted.
  std::vector<std::string> props() const;
  /// Longest root path and largest child multiset size.
  std::size_t depth() const;
  BigInt max_out_degree() const;

  /// Unfolds the DAG into a graph; for tree_shaped each node occurrence gets
  /// its own subtree. Names fix the feature order; unmentioned propositions
  /// are 0. Returns nullopt above max_vertices.
  std::optional<PointedGraph> materialize(const std::vector<std::string>& names, std::size_t max_vertices,
                                          bool tree_shaped = false) const;
};

/// Truth of f at the root with successor counts weighted by multiplicity.
/// Agrees with model checking the materialised graph; #g is rejected.
bool weighted_check(const Witness& w, Formula f);

std::string witness_to_json(const Witness& w);

}  // namespace gnnv::sat
