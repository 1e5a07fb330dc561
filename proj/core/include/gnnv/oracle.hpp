#pragma once

#include <cstddef>
#include <optional>

#include "gnnv/formula.hpp"
#include "gnnv/graph.hpp"

namespace gnnv::sat {

/// Exhaustive search over pointed Boolean graphs with at most max_vertices
/// vertices (at most 8), using the first max_props propositions of f in
/// sorted order; the others are false. nullopt means no model within the
/// bound, which is not unsatisfiability. Throws InputError on #g or on
/// coefficients outside 64 bits.
std::optional<PointedGraph> bruteforce_sat(Formula f, std::size_t max_vertices = 4, std::size_t max_props = 2);

/// Searches tree models of depth at most depth where every vertex has at most
/// arity successors, by enumerating the truth types of trees bottom-up.
bool tree_bruteforce_sat(Formula f, std::size_t depth, std::size_t arity);

}  // namespace gnnv::sat
