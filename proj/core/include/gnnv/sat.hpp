#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gnnv/formula.hpp"
#include "gnnv/graph.hpp"
#include "gnnv/qfpa.hpp"
#include "gnnv/witness.hpp"

namespace gnnv::sat {

using arith::Verdict;
using arith::verdict_name;

/// Saturated set of formulas at one world: literals and linear atoms, sorted by id.
using Branch = std::vector<Formula>;

/// Decomposes conjunctions and disjunctions of NNF formulas; branches with a
/// p / ~p clash or a false constant atom are dropped.
std::vector<Branch> saturate_boolean(const std::vector<Formula>& gamma);

struct SatOptions {
  /// Node budget handed to the integer backend per query.
  std::size_t node_budget = 200000;
  /// Tableau calls before answering Unknown.
  std::size_t call_budget = 200000;
  /// Distinct #psi atoms per world before answering Unknown.
  std::size_t max_region_dim = 12;
  /// Larger witnesses stay symbolic.
  std::size_t max_materialize = 10000;
};

struct SatStats {
  std::size_t calls = 0;
  std::size_t branches = 0;
  std::size_t ilp_calls = 0;
  std::size_t refinements = 0;
  std::size_t max_support = 0;
  std::size_t max_region_dim = 0;
};

struct SatResult {
  Verdict verdict = Verdict::Unknown;
  std::optional<Witness> witness;
  /// Set when the witness was small enough to materialise.
  std::optional<PointedGraph> graph;
  SatStats stats;
  std::string reason;
};

/// True if every linear atom is a plain diamond, box or constant.
bool is_modal(Formula f);

/// Satisfiability in K by backtracking; the witness is a tree of depth at
/// most md(f) with at most one successor per diamond subformula.
SatResult sat_k(Formula f, const SatOptions& opts = {});

/// Satisfiability in K# over Boolean graphs. Throws InputError on #g.
SatResult sat_ksharp(Formula f, const SatOptions& opts = {});

/// Number of distinct diamond subformulas of nnf(f).
std::size_t diamond_count(Formula f);

}  // namespace gnnv::sat
