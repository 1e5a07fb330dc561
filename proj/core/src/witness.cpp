#include "gnnv/witness.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_map>

#include "gnnv/errors.hpp"
#include "json_util.hpp"

namespace gnnv::sat {

BigInt Witness::vertex_count() const {
  // Shared nodes appear once; every multiplicity m adds m - 1 copies.
  BigInt n = static_cast<unsigned long>(nodes.size());
  for (const auto& node : nodes) {
    for (const auto& [c, m] : node.children) n += m - 1;
  }
  return n;
}

std::vector<std::string> Witness::props() const {
  std::set<std::string> s;
  for (const auto& node : nodes) s.insert(node.props.begin(), node.props.end());
  return {s.begin(), s.end()};
}

std::size_t Witness::depth() const {
  std::unordered_map<std::size_t, std::size_t> memo;
  std::function<std::size_t(std::size_t)> rec = [&](std::size_t i) -> std::size_t {
    if (auto it = memo.find(i); it != memo.end()) return it->second;
    std::size_t d = 0;
    for (const auto& [c, m] : nodes[i].children) d = std::max(d, 1 + rec(c));
    memo.emplace(i, d);
    return d;
  };
  return rec(root);
}

BigInt Witness::max_out_degree() const {
  BigInt best = 0;
  for (const auto& node : nodes) {
    BigInt deg = 0;
    for (const auto& [c, m] : node.children) deg += m;
    best = std::max(best, deg);
  }
  return best;
}

std::optional<PointedGraph> Witness::materialize(const std::vector<std::string>& names, std::size_t max_vertices,
                                                 bool tree_shaped) const {
  std::vector<Label> labels;
  std::vector<std::vector<Vertex>> succ;
  auto label_of = [&](const WitnessNode& node) {
    Label l(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (std::binary_search(node.props.begin(), node.props.end(), names[i])) l[i] = 1;
    }
    return l;
  };
  bool too_big = false;
  auto new_vertex = [&](Label l) -> Vertex {
    if (labels.size() >= max_vertices) too_big = true;
    labels.push_back(std::move(l));
    succ.emplace_back();
    return static_cast<Vertex>(labels.size() - 1);
  };

  std::unordered_map<std::size_t, Vertex> shared;
  std::function<Vertex(std::size_t)> build = [&](std::size_t i) -> Vertex {
    if (!tree_shaped) {
      if (auto it = shared.find(i); it != shared.end()) return it->second;
    }
    const WitnessNode& node = nodes[i];
    Vertex v = new_vertex(label_of(node));
    if (!tree_shaped) shared.emplace(i, v);
    for (const auto& [c, m] : node.children) {
      if (too_big) return v;
      if (m > static_cast<unsigned long>(max_vertices)) {
        too_big = true;
        return v;
      }
      const auto count = m.get_ui();
      if (tree_shaped) {
        for (unsigned long k = 0; k < count && !too_big; ++k) {
          Vertex cv = build(c);
          succ[v].push_back(cv);
        }
      } else {
        Vertex cv = build(c);
        succ[v].push_back(cv);
        for (unsigned long k = 1; k < count && !too_big; ++k) {
          Vertex copy = new_vertex(labels[cv]);
          succ[copy] = succ[cv];
          succ[v].push_back(copy);
        }
      }
    }
    return v;
  };
  if (vertex_count() > static_cast<unsigned long>(max_vertices) && !tree_shaped) return std::nullopt;
  Vertex r = build(root);
  if (too_big || labels.size() > max_vertices) return std::nullopt;
  std::vector<Edge> edges;
  for (Vertex u = 0; u < succ.size(); ++u) {
    for (Vertex v : succ[u]) edges.emplace_back(u, v);
  }
  const std::size_t n = labels.size();
  return PointedGraph(LabelledGraph(n, names.size(), std::move(labels), std::move(edges), names), r);
}

namespace {

class WeightedChecker {
 public:
  explicit WeightedChecker(const Witness& w) : w_(w) {}

  bool holds(std::size_t node, Formula f) {
    auto key = std::pair{node, f.id()};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool r = false;
    const WitnessNode& n = w_.nodes[node];
    switch (f.kind()) {
      case FormulaKind::Prop:
        r = std::binary_search(n.props.begin(), n.props.end(), f.prop_name());
        break;
      case FormulaKind::Not: r = !holds(node, f.operand()); break;
      case FormulaKind::And: r = holds(node, f.left()) && holds(node, f.right()); break;
      case FormulaKind::Or: r = holds(node, f.left()) || holds(node, f.right()); break;
      case FormulaKind::LinGe: {
        BigInt v = f.lin().constant();
        for (const auto& t : f.lin().terms()) {
          switch (t.kind) {
            case AtomKind::Ind:
              if (holds(node, t.arg)) v += t.coeff;
              break;
            case AtomKind::Count:
              for (const auto& [c, m] : n.children) {
                if (holds(c, t.arg)) v += t.coeff * m;
              }
              break;
            case AtomKind::GCount:
              throw InputError("weighted checking does not support #g");
          }
        }
        r = v >= 0;
        break;
      }
    }
    memo_.emplace(key, r);
    return r;
  }

 private:
  struct PairHash {
    std::size_t operator()(const std::pair<std::size_t, std::uint32_t>& p) const {
      return p.first * 1000003u ^ p.second;
    }
  };
  const Witness& w_;
  std::unordered_map<std::pair<std::size_t, std::uint32_t>, bool, PairHash> memo_;
};

}  // namespace

bool weighted_check(const Witness& w, Formula f) { return WeightedChecker(w).holds(w.root, f); }

std::string witness_to_json(const Witness& w) {
  json nodes = json::array();
  for (std::size_t i = 0; i < w.nodes.size(); ++i) {
    json children = json::array();
    for (const auto& [c, m] : w.nodes[i].children) {
      children.push_back(json{{"node", c}, {"count", fits_int64(m) ? json(to_int64(m)) : json(m.get_str())}});
    }
    nodes.push_back(json{{"id", i}, {"props", w.nodes[i].props}, {"children", children}});
  }
  return json{{"root", w.root}, {"nodes", nodes}}.dump();
}

}  // namespace gnnv::sat
