#include "gnnv/graph.hpp"

#include <algorithm>
#include <functional>
#include <random>

#include "gnnv/errors.hpp"

namespace gnnv {

LabelledGraph::LabelledGraph(std::size_t n, std::size_t dim, std::vector<Label> labels, std::vector<Edge> edges,
                             std::vector<std::string> prop_names)
    : dim_(dim), labels_(std::move(labels)), successors_(n) {
  if (n == 0) throw InputError("graph must have at least one vertex");
  if (labels_.size() != n) {
    throw InputError("expected " + std::to_string(n) + " label rows, got " + std::to_string(labels_.size()));
  }
  for (std::size_t u = 0; u < n; ++u) {
    if (labels_[u].size() != dim) {
      throw InputError("label row " + std::to_string(u) + " has length " + std::to_string(labels_[u].size()) +
                       ", expected " + std::to_string(dim));
    }
    for (const auto& x : labels_[u]) {
      if (x != 0 && x != 1) is_boolean_ = false;
    }
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto [u, v] = edges[i];
    if (u >= n || v >= n) {
      throw InputError("edge " + std::to_string(i) + " (" + std::to_string(u) + "," + std::to_string(v) +
                       "): edge endpoint out of range");
    }
    successors_[u].push_back(v);
  }
  for (auto& succ : successors_) {
    std::sort(succ.begin(), succ.end());
    succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    edge_count_ += succ.size();
  }
  if (prop_names.empty()) {
    for (std::size_t i = 0; i < dim; ++i) prop_names_.push_back(default_prop_name(i));
  } else {
    if (prop_names.size() != dim) {
      throw InputError("prop_names has " + std::to_string(prop_names.size()) + " entries, expected " +
                       std::to_string(dim));
    }
    prop_names_ = std::move(prop_names);
    explicit_names_ = true;
  }
}

bool LabelledGraph::has_edge(Vertex u, Vertex v) const {
  const auto& succ = successors_[u];
  return std::binary_search(succ.begin(), succ.end(), v);
}

std::vector<Edge> LabelledGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (Vertex u = 0; u < successors_.size(); ++u) {
    for (Vertex v : successors_[u]) out.emplace_back(u, v);
  }
  return out;
}

std::optional<std::size_t> LabelledGraph::prop_index(const std::string& name) const {
  auto it = std::find(prop_names_.begin(), prop_names_.end(), name);
  if (it == prop_names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - prop_names_.begin());
}

bool operator==(const LabelledGraph& a, const LabelledGraph& b) {
  return a.dim_ == b.dim_ && a.labels_ == b.labels_ && a.successors_ == b.successors_ &&
         a.prop_names_ == b.prop_names_;
}

PointedGraph::PointedGraph(LabelledGraph g, Vertex u) : graph(std::move(g)), point(u) {
  if (u >= graph.size()) throw InputError("point " + std::to_string(u) + " is not a vertex");
}

std::string default_prop_name(std::size_t index) { return "x" + std::to_string(index + 1); }

std::span<const Vertex> successors(const LabelledGraph& g, Vertex u) { return g.successors(u); }

LabelledGraph apply_permutation(const LabelledGraph& g, std::span<const Vertex> pi) {
  const std::size_t n = g.size();
  if (pi.size() != n) throw InputError("permutation has wrong length");
  std::vector<bool> seen(n, false);
  for (Vertex x : pi) {
    if (x >= n || seen[x]) throw InputError("permutation is not a bijection");
    seen[x] = true;
  }
  std::vector<Label> labels(n);
  for (Vertex u = 0; u < n; ++u) labels[pi[u]] = g.label(u);
  std::vector<Edge> edges;
  for (auto [u, v] : g.edges()) edges.emplace_back(pi[u], pi[v]);
  return LabelledGraph(n, g.dim(), std::move(labels), std::move(edges),
                       g.has_explicit_prop_names() ? g.prop_names() : std::vector<std::string>{});
}

bool brute_force_isomorphic(const LabelledGraph& g, const LabelledGraph& h) {
  if (g.size() > kIsomorphismGuard || h.size() > kIsomorphismGuard) {
    throw LimitExceeded("brute-force isomorphism is limited to " + std::to_string(kIsomorphismGuard) +
                        " vertices");
  }
  const std::size_t n = g.size();
  if (n != h.size() || g.dim() != h.dim() || g.edge_count() != h.edge_count()) return false;

  std::vector<Vertex> pi(n);
  std::vector<bool> used(n, false);
  // Extend pi vertex by vertex; every prefix must already be a partial isomorphism.
  std::function<bool(Vertex)> extend = [&](Vertex u) -> bool {
    if (u == n) return true;
    for (Vertex x = 0; x < n; ++x) {
      if (used[x] || g.label(u) != h.label(x)) continue;
      if (g.successors(u).size() != h.successors(x).size()) continue;
      bool ok = g.has_edge(u, u) == h.has_edge(x, x);
      for (Vertex w = 0; ok && w < u; ++w) {
        ok = g.has_edge(u, w) == h.has_edge(x, pi[w]) && g.has_edge(w, u) == h.has_edge(pi[w], x);
      }
      if (!ok) continue;
      pi[u] = x;
      used[x] = true;
      if (extend(u + 1)) return true;
      used[x] = false;
    }
    return false;
  };
  return extend(0);
}

LabelledGraph random_graph(std::size_t n, const Rational& edge_prob, std::size_t dim, bool boolean_labels,
                           std::uint64_t seed) {
  if (n == 0) throw InputError("random_graph needs n >= 1");
  if (edge_prob < 0 || edge_prob > 1) throw InputError("edge probability must lie in [0,1]");
  std::mt19937_64 rng(seed);
  const auto num = edge_prob.get_num().get_ui();
  const auto den = edge_prob.get_den().get_ui();
  std::uniform_int_distribution<unsigned long> coin(0, den - 1);
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = 0; v < n; ++v) {
      if (coin(rng) < num) edges.emplace_back(u, v);
    }
  }
  std::vector<Label> labels(n, Label(dim));
  std::uniform_int_distribution<int> bit(0, 1);
  std::uniform_int_distribution<int> small(-4, 4);
  for (auto& row : labels) {
    for (auto& x : row) {
      x = boolean_labels ? Rational(bit(rng)) : Rational(small(rng), 2);
      x.canonicalize();
    }
  }
  return LabelledGraph(n, dim, std::move(labels), std::move(edges));
}

LabelledGraph symmetrize(const LabelledGraph& g) {
  auto edges = g.edges();
  const std::size_t m = edges.size();
  for (std::size_t i = 0; i < m; ++i) edges.emplace_back(edges[i].second, edges[i].first);
  return LabelledGraph(g.size(), g.dim(), g.labels(), std::move(edges),
                       g.has_explicit_prop_names() ? g.prop_names() : std::vector<std::string>{});
}

LabelledGraph disjoint_union(const LabelledGraph& g, const LabelledGraph& h) {
  if (g.dim() != h.dim()) throw InputError("disjoint union of graphs with different feature dimensions");
  const auto shift = static_cast<Vertex>(g.size());
  std::vector<Label> labels = g.labels();
  labels.insert(labels.end(), h.labels().begin(), h.labels().end());
  std::vector<Edge> edges = g.edges();
  for (auto [u, v] : h.edges()) edges.emplace_back(u + shift, v + shift);
  return LabelledGraph(g.size() + h.size(), g.dim(), std::move(labels), std::move(edges),
                       g.has_explicit_prop_names() ? g.prop_names() : std::vector<std::string>{});
}

}  // namespace gnnv
