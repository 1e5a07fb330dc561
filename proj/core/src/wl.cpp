#include "gnnv/wl.hpp"

#include <algorithm>
#include <unordered_set>

#include "gnnv/errors.hpp"

namespace gnnv::wl {

namespace {

void append_u32(std::string& s, std::uint32_t x) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((x >> (8 * i)) & 0xff));
}

std::size_t count_classes(std::span<const ColorId> a) {
  std::unordered_set<ColorId> s(a.begin(), a.end());
  return s.size();
}

}  // namespace

ColorId ColorTable::intern(std::string code, ColorKey key) {
  auto [it, inserted] = index_.emplace(std::move(code), static_cast<ColorId>(keys_.size()));
  if (inserted) keys_.push_back(std::move(key));
  return it->second;
}

ColorId ColorTable::intern_init(const Label& label) {
  std::string code = "I";
  for (const auto& q : label) code += q.get_str() + ",";
  return intern(std::move(code), ColorKey{true, label, 0, {}});
}

ColorId ColorTable::intern_node(ColorId prev, std::vector<ColorId> sorted_multiset) {
  std::string code = "N";
  append_u32(code, prev);
  for (ColorId c : sorted_multiset) append_u32(code, c);
  return intern(std::move(code), ColorKey{false, {}, prev, std::move(sorted_multiset)});
}

std::size_t Coloring::class_count() const { return count_classes(assignment); }

Coloring initial_coloring(const LabelledGraph& g, std::shared_ptr<ColorTable> table) {
  if (!table) table = std::make_shared<ColorTable>();
  Coloring c{std::vector<ColorId>(g.size()), table};
  for (Vertex u = 0; u < g.size(); ++u) c.assignment[u] = table->intern_init(g.label(u));
  return c;
}

Coloring refine(const LabelledGraph& g, const Coloring& coloring) {
  if (coloring.assignment.size() != g.size()) throw InputError("coloring does not cover the graph");
  Coloring out{std::vector<ColorId>(g.size()), coloring.table};
  std::vector<ColorId> ms;
  for (Vertex u = 0; u < g.size(); ++u) {
    ms.clear();
    for (Vertex v : g.successors(u)) ms.push_back(coloring.assignment[v]);
    std::sort(ms.begin(), ms.end());
    out.assignment[u] = coloring.table->intern_node(coloring.assignment[u], ms);
  }
  return out;
}

RefinementTrace color_refinement(const LabelledGraph& g, std::shared_ptr<ColorTable> table) {
  RefinementTrace trace;
  trace.rounds.push_back(initial_coloring(g, std::move(table)));
  while (true) {
    trace.rounds.push_back(refine(g, trace.rounds.back()));
    const auto& prev = trace.rounds[trace.rounds.size() - 2].assignment;
    const auto& cur = trace.rounds.back().assignment;
    // Refinement only splits classes, so equal class counts mean equivalence.
    if (count_classes(prev) == count_classes(cur)) break;
  }
  trace.stable_round = trace.rounds.size() - 2;
  return trace;
}

bool labellings_equivalent(std::span<const ColorId> a, std::span<const ColorId> b) {
  if (a.size() != b.size()) return false;
  std::unordered_map<ColorId, ColorId> fwd, bwd;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto [f, fi] = fwd.emplace(a[i], b[i]);
    auto [r, ri] = bwd.emplace(b[i], a[i]);
    if (f->second != b[i] || r->second != a[i]) return false;
  }
  return true;
}

bool cr_indist_graphs(const LabelledGraph& g, const LabelledGraph& h) {
  if (g.size() != h.size() || g.dim() != h.dim()) return false;
  LabelledGraph un = disjoint_union(g, h);
  auto trace = color_refinement(un);
  std::vector<ColorId> a(trace.stable().assignment.begin(), trace.stable().assignment.begin() + g.size());
  std::vector<ColorId> b(trace.stable().assignment.begin() + g.size(), trace.stable().assignment.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

bool cr_indist_pointed(const LabelledGraph& g, Vertex u, const LabelledGraph& h, Vertex v) {
  if (u >= g.size() || v >= h.size()) throw InputError("vertex out of range");
  if (g.dim() != h.dim()) return false;
  LabelledGraph un = disjoint_union(g, h);
  auto trace = color_refinement(un);
  return trace.stable().assignment[u] == trace.stable().assignment[g.size() + v];
}

std::map<ColorId, std::size_t> PairColoring::histogram() const {
  std::map<ColorId, std::size_t> h;
  for (ColorId c : assignment) ++h[c];
  return h;
}

std::vector<PairColoring> pair_refinement(std::span<const LabelledGraph* const> graphs, PairTest test,
                                          std::size_t cap) {
  ColorTable table;
  std::vector<PairColoring> cols;
  std::vector<std::uint32_t> scratch;
  for (const LabelledGraph* g : graphs) {
    if (g->size() > cap) {
      throw LimitExceeded("pair test limited to " + std::to_string(cap) + " vertices, graph has " +
                          std::to_string(g->size()));
    }
    const std::size_t n = g->size();
    PairColoring pc{n, std::vector<ColorId>(n * n), 0};
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = 0; v < n; ++v) {
        Label atomic = g->label(u);
        atomic.insert(atomic.end(), g->label(v).begin(), g->label(v).end());
        atomic.emplace_back(g->has_edge(u, v) ? 1 : 0);
        if (test == PairTest::Fwl2) {
          atomic.emplace_back(u == v ? 1 : 0);
          atomic.emplace_back(g->has_edge(v, u) ? 1 : 0);
          atomic.emplace_back(g->has_edge(u, u) ? 1 : 0);
          atomic.emplace_back(g->has_edge(v, v) ? 1 : 0);
        }
        pc.assignment[u * n + v] = table.intern_init(atomic);
      }
    }
    cols.push_back(std::move(pc));
  }

  auto joint_classes = [&] {
    std::unordered_set<ColorId> s;
    for (const auto& pc : cols) s.insert(pc.assignment.begin(), pc.assignment.end());
    return s.size();
  };

  std::size_t classes = joint_classes();
  while (true) {
    for (auto& pc : cols) {
      const std::size_t n = pc.n;
      std::vector<ColorId> next(n * n);
      for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
          scratch.clear();
          if (test == PairTest::Owl2) {
            // Two separate multisets, joined with a separator that is not a color id.
            std::vector<ColorId> col, row;
            for (std::size_t w = 0; w < n; ++w) {
              col.push_back(pc.assignment[w * n + v]);
              row.push_back(pc.assignment[u * n + w]);
            }
            std::sort(col.begin(), col.end());
            std::sort(row.begin(), row.end());
            scratch = col;
            scratch.push_back(UINT32_MAX);
            scratch.insert(scratch.end(), row.begin(), row.end());
          } else {
            std::vector<std::uint64_t> pairs;
            for (std::size_t w = 0; w < n; ++w) {
              pairs.push_back((static_cast<std::uint64_t>(pc.assignment[w * n + v]) << 32) |
                              pc.assignment[u * n + w]);
            }
            std::sort(pairs.begin(), pairs.end());
            for (auto p : pairs) {
              scratch.push_back(static_cast<std::uint32_t>(p >> 32));
              scratch.push_back(static_cast<std::uint32_t>(p));
            }
          }
          next[u * n + v] = table.intern_node(pc.assignment[u * n + v], scratch);
        }
      }
      pc.assignment = std::move(next);
      ++pc.rounds;
    }
    std::size_t now = joint_classes();
    if (now == classes) break;
    classes = now;
  }
  return cols;
}

PairColoring owl2(const LabelledGraph& g, std::size_t cap) {
  const LabelledGraph* gs[] = {&g};
  return std::move(pair_refinement(gs, PairTest::Owl2, cap).front());
}

PairColoring fwl2(const LabelledGraph& g, std::size_t cap) {
  const LabelledGraph* gs[] = {&g};
  return std::move(pair_refinement(gs, PairTest::Fwl2, cap).front());
}

bool pair_indist_graphs(const LabelledGraph& g, const LabelledGraph& h, PairTest test, std::size_t cap) {
  if (g.size() != h.size() || g.dim() != h.dim()) return false;
  const LabelledGraph* gs[] = {&g, &h};
  auto cols = pair_refinement(gs, test, cap);
  return cols[0].histogram() == cols[1].histogram();
}

namespace {

class CharFormulaBuilder {
 public:
  CharFormulaBuilder(const LabelledGraph& g, const ColorTable& table) : g_(g), table_(table) {}

  Formula build(ColorId c) {
    if (auto it = memo_.find(c); it != memo_.end()) return it->second;
    const ColorKey& key = table_.key(c);
    Formula out = key.is_init ? literals(key.label) : refined(key);
    memo_.emplace(c, out);
    return out;
  }

 private:
  Formula literals(const Label& label) {
    std::vector<Formula> lits;
    for (std::size_t i = 0; i < label.size(); ++i) {
      Formula p = prop(g_.prop_names()[i]);
      lits.push_back(label[i] == 1 ? p : neg(p));
    }
    return conj(lits);
  }

  Formula refined(const ColorKey& key) {
    std::vector<Formula> parts{build(key.prev)};
    std::vector<Formula> alternatives;
    for (std::size_t i = 0; i < key.multiset.size();) {
      std::size_t j = i;
      while (j < key.multiset.size() && key.multiset[j] == key.multiset[i]) ++j;
      Formula sub = build(key.multiset[i]);
      parts.push_back(exactly_diamond(BigInt(static_cast<unsigned long>(j - i)), sub));
      alternatives.push_back(sub);
      i = j;
    }
    parts.push_back(box(disj(alternatives)));
    return conj(parts);
  }

  const LabelledGraph& g_;
  const ColorTable& table_;
  std::unordered_map<ColorId, Formula> memo_;
};

}  // namespace

Formula characteristic_formula(const LabelledGraph& g, Vertex u, std::size_t t) {
  if (!g.is_boolean()) throw InputError("characteristic formulas need 0/1 labels");
  if (u >= g.size()) throw InputError("vertex out of range");
  Coloring c = initial_coloring(g);
  for (std::size_t i = 0; i < t; ++i) c = refine(g, c);
  CharFormulaBuilder builder(g, *c.table);
  return builder.build(c.assignment[u]);
}

}  // namespace gnnv::wl
