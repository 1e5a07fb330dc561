#include "gnnv/model_check.hpp"

#include "gnnv/errors.hpp"

namespace gnnv {

ModelChecker::ModelChecker(const LabelledGraph& g) : g_(g) {
  if (!g.is_boolean()) throw InputError("model checking needs a graph with 0/1 labels");
}

bool ModelChecker::holds(Vertex u, Formula f) {
  if (u >= g_.size()) throw InputError("vertex " + std::to_string(u) + " out of range");
  return truth(f)[u] != 0;
}

const std::vector<char>& ModelChecker::truth(Formula f) {
  if (auto it = memo_.find(f); it != memo_.end()) return it->second;
  const std::size_t n = g_.size();
  std::vector<char> out(n, 0);
  switch (f.kind()) {
    case FormulaKind::Prop: {
      if (auto idx = g_.prop_index(f.prop_name())) {
        for (Vertex u = 0; u < n; ++u) out[u] = g_.label(u)[*idx] == 1;
      }
      break;
    }
    case FormulaKind::Not: {
      const auto& a = truth(f.operand());
      for (Vertex u = 0; u < n; ++u) out[u] = !a[u];
      break;
    }
    case FormulaKind::And:
    case FormulaKind::Or: {
      const auto a = truth(f.left());
      const auto& b = truth(f.right());
      bool is_and = f.kind() == FormulaKind::And;
      for (Vertex u = 0; u < n; ++u) out[u] = is_and ? (a[u] && b[u]) : (a[u] || b[u]);
      break;
    }
    case FormulaKind::LinGe:
      for (Vertex u = 0; u < n; ++u) out[u] = eval_lin(u, f.lin()) >= 0;
      break;
  }
  return memo_.emplace(f, std::move(out)).first->second;
}

const BigInt& ModelChecker::global_count(Formula f) {
  if (auto it = global_.find(f); it != global_.end()) return it->second;
  const auto& t = truth(f);
  std::size_t c = 0;
  for (char b : t) c += b != 0;
  return global_.emplace(f, BigInt(static_cast<unsigned long>(c))).first->second;
}

BigInt ModelChecker::atom_value(Vertex u, const LinTerm& t) {
  switch (t.kind) {
    case AtomKind::Ind:
      return truth(t.arg)[u] ? 1 : 0;
    case AtomKind::Count: {
      const auto& a = truth(t.arg);
      unsigned long c = 0;
      for (Vertex v : g_.successors(u)) c += a[v] != 0;
      return BigInt(c);
    }
    case AtomKind::GCount:
      return global_count(t.arg);
  }
  return 0;
}

BigInt ModelChecker::eval_lin(Vertex u, const LinExpr& xi) {
  BigInt value = xi.constant();
  for (const auto& t : xi.terms()) value += t.coeff * atom_value(u, t);
  return value;
}

bool model_check(const LabelledGraph& g, Vertex u, Formula f) { return ModelChecker(g).holds(u, f); }

BigInt eval_lin(const LabelledGraph& g, Vertex u, const LinExpr& xi) {
  if (u >= g.size()) throw InputError("vertex " + std::to_string(u) + " out of range");
  return ModelChecker(g).eval_lin(u, xi);
}

}  // namespace gnnv
