#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gnnv/numeric.hpp"

namespace gnnv {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;
using Label = std::vector<Rational>;

/// Directed graph with one rational feature vector per vertex. With 0/1
/// features it doubles as a Kripke model whose propositions are named by
/// prop_names (default x1..xd).
class LabelledGraph {
 public:
  /// Validates every invariant; throws InputError on violation. Duplicate
  /// edges are collapsed.
  LabelledGraph(std::size_t n, std::size_t dim, std::vector<Label> labels, std::vector<Edge> edges,
                std::vector<std::string> prop_names = {});

  std::size_t size() const { return successors_.size(); }
  std::size_t dim() const { return dim_; }
  std::size_t edge_count() const { return edge_count_; }

  const Label& label(Vertex u) const { return labels_[u]; }
  const std::vector<Label>& labels() const { return labels_; }
  /// Out-neighbours of u in increasing order.
  std::span<const Vertex> successors(Vertex u) const { return successors_[u]; }
  bool has_edge(Vertex u, Vertex v) const;
  std::vector<Edge> edges() const;

  const std::vector<std::string>& prop_names() const { return prop_names_; }
  bool has_explicit_prop_names() const { return explicit_names_; }
  /// Feature index for a proposition name, if any.
  std::optional<std::size_t> prop_index(const std::string& name) const;

  /// Every label entry is 0 or 1.
  bool is_boolean() const { return is_boolean_; }

  friend bool operator==(const LabelledGraph& a, const LabelledGraph& b);

 private:
  std::size_t dim_;
  std::vector<Label> labels_;
  std::vector<std::vector<Vertex>> successors_;
  std::vector<std::string> prop_names_;
  bool explicit_names_ = false;
  std::size_t edge_count_ = 0;
  bool is_boolean_ = true;
};

struct PointedGraph {
  LabelledGraph graph;
  Vertex point;

  PointedGraph(LabelledGraph g, Vertex u);
};

std::string default_prop_name(std::size_t index);

std::span<const Vertex> successors(const LabelledGraph& g, Vertex u);

/// Vertex u of g becomes vertex pi[u] of the result.
LabelledGraph apply_permutation(const LabelledGraph& g, std::span<const Vertex> pi);

/// Exhaustive search for a label- and edge-preserving bijection. Both graphs
/// must have at most kIsomorphismGuard vertices.
inline constexpr std::size_t kIsomorphismGuard = 9;
bool brute_force_isomorphic(const LabelledGraph& g, const LabelledGraph& h);

/// Each ordered pair (self-loops included) is an edge independently with
/// probability edge_prob. Boolean labels are fair coins; other labels are
/// small integers and halves in [-2, 2].
LabelledGraph random_graph(std::size_t n, const Rational& edge_prob, std::size_t dim, bool boolean_labels,
                           std::uint64_t seed);

/// Adds (v,u) for every edge (u,v).
LabelledGraph symmetrize(const LabelledGraph& g);

/// Vertices of h are shifted by g.size(). Both graphs must have the same dim.
LabelledGraph disjoint_union(const LabelledGraph& g, const LabelledGraph& h);

}  // namespace gnnv
