#include "gnnv/oracle.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <set>
#include <unordered_map>

#include "gnnv/errors.hpp"

namespace gnnv::sat {

namespace {

// Subformulas of f, children before parents.
std::vector<Formula> closure(Formula f) {
  std::vector<Formula> order;
  std::set<std::uint32_t> seen;
  std::function<void(Formula)> rec = [&](Formula g) {
    if (!seen.insert(g.id()).second) return;
    switch (g.kind()) {
      case FormulaKind::Prop: break;
      case FormulaKind::Not: rec(g.operand()); break;
      case FormulaKind::And:
      case FormulaKind::Or:
        rec(g.left());
        rec(g.right());
        break;
      case FormulaKind::LinGe:
        for (const auto& t : g.lin().terms()) {
          if (t.kind == AtomKind::GCount) throw InputError("the brute-force oracles do not support #g");
          rec(t.arg);
        }
        break;
    }
    order.push_back(g);
  };
  rec(f);
  return order;
}

struct CompiledTerm {
  long coeff;
  AtomKind kind;
  std::size_t arg;
};

struct Compiled {
  FormulaKind kind;
  std::size_t a = 0, b = 0;
  long prop = -1;
  long constant = 0;
  std::vector<CompiledTerm> terms;
};

long small(const BigInt& v) {
  if (!fits_int64(v)) throw InputError("coefficient too large for the brute-force oracle");
  return static_cast<long>(to_int64(v));
}

std::vector<Compiled> compile(const std::vector<Formula>& order, const std::vector<std::string>& props) {
  std::unordered_map<Formula, std::size_t> pos;
  for (std::size_t i = 0; i < order.size(); ++i) pos.emplace(order[i], i);
  std::vector<Compiled> prog;
  for (Formula g : order) {
    Compiled c;
    c.kind = g.kind();
    switch (g.kind()) {
      case FormulaKind::Prop: {
        auto it = std::find(props.begin(), props.end(), g.prop_name());
        c.prop = it == props.end() ? -1 : it - props.begin();
        break;
      }
      case FormulaKind::Not: c.a = pos.at(g.operand()); break;
      case FormulaKind::And:
      case FormulaKind::Or:
        c.a = pos.at(g.left());
        c.b = pos.at(g.right());
        break;
      case FormulaKind::LinGe:
        c.constant = small(g.lin().constant());
        for (const auto& t : g.lin().terms()) c.terms.push_back({small(t.coeff), t.kind, pos.at(t.arg)});
        break;
    }
    prog.push_back(std::move(c));
  }
  return prog;
}

}  // namespace

std::optional<PointedGraph> bruteforce_sat(Formula f, std::size_t max_vertices, std::size_t max_props) {
  if (max_vertices > 8) throw InputError("bruteforce_sat supports at most 8 vertices");
  const auto order = closure(f);
  const auto all_props = collect_props(f);
  std::vector<std::string> props(all_props.begin(), all_props.end());
  if (props.size() > max_props) props.resize(max_props);
  const auto prog = compile(order, props);
  const std::size_t p = props.size();
  const std::uint32_t label_count = 1u << p;

  std::vector<std::uint32_t> truth(prog.size());
  for (std::size_t n = 1; n <= max_vertices; ++n) {
    const std::uint32_t all = (1u << n) - 1;
    std::vector<std::uint32_t> lab(n, 0);
    std::vector<std::uint32_t> succ(n);
    // Labels non-decreasing: every graph is isomorphic to one of this form.
    while (true) {
      const std::uint64_t edge_sets = std::uint64_t{1} << (n * n);
      for (std::uint64_t e = 0; e < edge_sets; ++e) {
        for (std::size_t u = 0; u < n; ++u) succ[u] = static_cast<std::uint32_t>(e >> (u * n)) & all;
        for (std::size_t i = 0; i < prog.size(); ++i) {
          const Compiled& c = prog[i];
          std::uint32_t t = 0;
          switch (c.kind) {
            case FormulaKind::Prop:
              if (c.prop >= 0) {
                for (std::size_t u = 0; u < n; ++u) t |= ((lab[u] >> c.prop) & 1u) << u;
              }
              break;
            case FormulaKind::Not: t = ~truth[c.a] & all; break;
            case FormulaKind::And: t = truth[c.a] & truth[c.b]; break;
            case FormulaKind::Or: t = truth[c.a] | truth[c.b]; break;
            case FormulaKind::LinGe:
              for (std::size_t u = 0; u < n; ++u) {
                long v = c.constant;
                for (const auto& term : c.terms) {
                  if (term.kind == AtomKind::Ind) {
                    v += term.coeff * ((truth[term.arg] >> u) & 1u);
                  } else {
                    v += term.coeff * std::popcount(succ[u] & truth[term.arg]);
                  }
                }
                if (v >= 0) t |= 1u << u;
              }
              break;
          }
          truth[i] = t;
        }
        if (const std::uint32_t root = truth.back()) {
          std::vector<Label> labels(n, Label(p));
          for (std::size_t u = 0; u < n; ++u) {
            for (std::size_t j = 0; j < p; ++j) labels[u][j] = (lab[u] >> j) & 1u;
          }
          std::vector<Edge> edges;
          for (Vertex u = 0; u < n; ++u) {
            for (Vertex v = 0; v < n; ++v) {
              if (succ[u] >> v & 1u) edges.emplace_back(u, v);
            }
          }
          return PointedGraph(LabelledGraph(n, p, std::move(labels), std::move(edges), props),
                              static_cast<Vertex>(std::countr_zero(root)));
        }
      }
      // Next non-decreasing label sequence.
      std::size_t i = n;
      while (i > 0 && lab[i - 1] == label_count - 1) --i;
      if (i == 0) break;
      ++lab[i - 1];
      for (std::size_t j = i; j < n; ++j) lab[j] = lab[i - 1];
    }
  }
  return std::nullopt;
}

bool tree_bruteforce_sat(Formula f, std::size_t depth, std::size_t arity) {
  const auto order = closure(f);
  const auto prop_set = collect_props(f);
  const std::vector<std::string> props(prop_set.begin(), prop_set.end());
  const auto prog = compile(order, props);
  using Type = std::vector<char>;
  // Parents see their children only through how many satisfy each Count
  // argument, so a set of children is summarised by that count vector.
  using Counts = std::vector<long>;

  std::vector<std::size_t> count_args;
  for (const Compiled& c : prog) {
    for (const auto& term : c.terms) {
      if (term.kind == AtomKind::Count) count_args.push_back(term.arg);
    }
  }
  std::sort(count_args.begin(), count_args.end());
  count_args.erase(std::unique(count_args.begin(), count_args.end()), count_args.end());
  std::vector<long> slot(prog.size(), -1);
  for (std::size_t k = 0; k < count_args.size(); ++k) slot[count_args[k]] = static_cast<long>(k);

  auto evaluate = [&](std::uint32_t valuation, const Counts& counts) {
    Type t(prog.size());
    for (std::size_t i = 0; i < prog.size(); ++i) {
      const Compiled& c = prog[i];
      switch (c.kind) {
        case FormulaKind::Prop: t[i] = c.prop >= 0 && (valuation >> c.prop & 1u); break;
        case FormulaKind::Not: t[i] = !t[c.a]; break;
        case FormulaKind::And: t[i] = t[c.a] && t[c.b]; break;
        case FormulaKind::Or: t[i] = t[c.a] || t[c.b]; break;
        case FormulaKind::LinGe: {
          long v = c.constant;
          for (const auto& term : c.terms) {
            v += term.coeff * (term.kind == AtomKind::Ind ? t[term.arg] : counts[slot[term.arg]]);
          }
          t[i] = v >= 0;
          break;
        }
      }
    }
    return t;
  };

  const std::uint32_t valuations = 1u << props.size();
  std::set<Type> types;
  const Counts none(count_args.size(), 0);
  for (std::uint32_t val = 0; val < valuations; ++val) types.insert(evaluate(val, none));
  for (std::size_t h = 0; h < depth; ++h) {
    std::set<Counts> child_profiles;
    for (const Type& t : types) {
      Counts c(count_args.size());
      for (std::size_t k = 0; k < count_args.size(); ++k) c[k] = t[count_args[k]];
      child_profiles.insert(std::move(c));
    }
    // Count vectors of multisets of at most arity children, one child at a time.
    std::set<Counts> reachable{none}, frontier{none};
    for (std::size_t step = 0; step < arity && !frontier.empty(); ++step) {
      std::set<Counts> next;
      for (const Counts& base : frontier) {
        for (const Counts& child : child_profiles) {
          Counts sum = base;
          for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += child[k];
          if (!reachable.count(sum)) next.insert(std::move(sum));
        }
      }
      reachable.insert(next.begin(), next.end());
      frontier = std::move(next);
    }
    for (const Counts& counts : reachable) {
      for (std::uint32_t val = 0; val < valuations; ++val) types.insert(evaluate(val, counts));
    }
  }
  return std::any_of(types.begin(), types.end(), [](const Type& t) { return t.back() != 0; });
}

}  // namespace gnnv::sat
