#include "gnnv/qbf.hpp"

#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "gnnv/errors.hpp"
#include "gnnv/formula_io.hpp"

namespace gnnv::sat {

namespace {

bool propositional(Formula f) {
  switch (f.kind()) {
    case FormulaKind::Prop: return true;
    case FormulaKind::Not: return propositional(f.operand());
    case FormulaKind::And:
    case FormulaKind::Or: return propositional(f.left()) && propositional(f.right());
    case FormulaKind::LinGe: return f.lin().is_constant();
  }
  return false;
}

bool eval_prop(Formula f, const std::map<std::string, bool>& val) {
  switch (f.kind()) {
    case FormulaKind::Prop: {
      auto it = val.find(f.prop_name());
      return it != val.end() && it->second;
    }
    case FormulaKind::Not: return !eval_prop(f.operand(), val);
    case FormulaKind::And: return eval_prop(f.left(), val) && eval_prop(f.right(), val);
    case FormulaKind::Or: return eval_prop(f.left(), val) || eval_prop(f.right(), val);
    case FormulaKind::LinGe: return f.lin().constant() >= 0;
  }
  return false;
}

Formula boxes(std::size_t k, Formula f) {
  for (std::size_t i = 0; i < k; ++i) f = box(f);
  return f;
}

// a <-> b as (~a | b) & (~b | a).
Formula expanded_iff(Formula a, Formula b) { return conj(disj(neg(a), b), disj(neg(b), a)); }

}  // namespace

Qbf parse_qbf(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InputError("qbf: expected ':' after the prefix");
  std::istringstream prefix(text.substr(0, colon));
  Qbf q;
  std::set<std::string> seen;
  std::string quant, var;
  while (prefix >> quant) {
    const char expected = q.vars.size() % 2 == 0 ? 'E' : 'A';
    if (quant.size() != 1 || quant[0] != expected) {
      throw InputError(std::string("qbf: expected quantifier ") + expected);
    }
    if (!(prefix >> var)) throw InputError("qbf: missing variable after quantifier");
    if (!seen.insert(var).second) throw InputError("qbf: repeated variable " + var);
    q.vars.push_back(var);
  }
  if (q.vars.empty() || q.vars.size() % 2 != 0) throw InputError("qbf: prefix must have even, non-zero length");
  q.matrix = parse_formula(text.substr(colon + 1));
  if (!propositional(q.matrix)) throw InputError("qbf: matrix must be propositional");
  return q;
}

std::string print_qbf(const Qbf& q) {
  std::string out;
  for (std::size_t i = 0; i < q.vars.size(); ++i) out += (i % 2 == 0 ? "E " : "A ") + q.vars[i] + " ";
  return out + ": " + print_formula(q.matrix);
}

bool qbf_eval(const Qbf& q) {
  std::map<std::string, bool> val;
  std::function<bool(std::size_t)> game = [&](std::size_t i) {
    if (i == q.vars.size()) return eval_prop(q.matrix, val);
    bool results[2];
    for (int b = 0; b < 2; ++b) {
      val[q.vars[i]] = b;
      results[b] = game(i + 1);
    }
    return i % 2 == 0 ? results[0] || results[1] : results[0] && results[1];
  };
  return game(0);
}

Formula tqbf_to_k(const Qbf& q) {
  std::vector<Formula> tree;
  for (std::size_t i = 0; i < q.vars.size(); ++i) {
    const Formula pi = prop(q.vars[i]);
    std::vector<Formula> parts{diamond(pi), diamond(neg(pi))};
    for (std::size_t j = 0; j < i; ++j) {
      const Formula pj = prop(q.vars[j]);
      parts.push_back(conj(expanded_iff(pj, box(pj)), expanded_iff(neg(pj), box(neg(pj)))));
    }
    tree.push_back(boxes(i, conj(parts)));
  }
  Formula game = q.matrix;
  for (std::size_t i = 0; i < q.vars.size(); i += 2) game = diamond(box(game));
  return conj(conj(tree), game);
}

Qbf random_qbf(std::size_t n, std::size_t depth, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Qbf q;
  for (std::size_t i = 1; i <= 2 * n; ++i) q.vars.push_back("p" + std::to_string(i));
  std::function<Formula(std::size_t)> gen = [&](std::size_t d) -> Formula {
    const auto pick = std::uniform_int_distribution<int>(0, d == 0 ? 1 : 3)(rng);
    if (pick <= 1) {
      Formula p = prop(q.vars[std::uniform_int_distribution<std::size_t>(0, q.vars.size() - 1)(rng)]);
      return pick == 0 ? p : neg(p);
    }
    return pick == 2 ? conj(gen(d - 1), gen(d - 1)) : disj(gen(d - 1), gen(d - 1));
  };
  q.matrix = gen(depth);
  return q;
}

}  // namespace gnnv::sat
