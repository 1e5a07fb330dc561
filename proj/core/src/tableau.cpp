#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "gnnv/errors.hpp"
#include "gnnv/model_check.hpp"
#include "gnnv/sat.hpp"

namespace gnnv::sat {

namespace {

using BranchFn = std::function<bool(const Branch&)>;

bool has_ind(Formula f) {
  for (const auto& t : f.lin().terms()) {
    if (t.kind == AtomKind::Ind) return true;
  }
  return false;
}

// Depth-first enumeration of saturated branches. The callback returns true to
// stop. With eliminate_ind, top-level 1_phi terms are resolved by choosing
// phi or its negation before disjunctions are split.
class Saturator {
 public:
  Saturator(bool eliminate_ind, const BranchFn& fn, std::size_t* counter, std::size_t budget)
      : ind_(eliminate_ind), fn_(fn), counter_(counter), budget_(budget) {}

  bool run(const std::vector<Formula>& gamma) { return step({}, gamma, {}, {}); }
  bool exhausted() const { return exhausted_; }

 private:
  bool step(std::set<Formula> have, std::vector<Formula> todo, std::vector<Formula> ors, std::vector<Formula> inds) {
    if (exhausted_) return false;
    if (counter_ && ++*counter_ > budget_) {
      exhausted_ = true;
      return false;
    }
    while (!todo.empty()) {
      Formula f = todo.back();
      todo.pop_back();
      if (!have.insert(f).second) continue;
      switch (f.kind()) {
        case FormulaKind::Prop:
          if (have.count(neg(f))) return false;
          break;
        case FormulaKind::Not:
          if (have.count(f.operand())) return false;
          break;
        case FormulaKind::And:
          todo.push_back(f.right());
          todo.push_back(f.left());
          break;
        case FormulaKind::Or: ors.push_back(f); break;
        case FormulaKind::LinGe:
          if (f.lin().is_constant()) {
            if (f.lin().constant() < 0) return false;
          } else if (ind_ && has_ind(f)) {
            inds.push_back(f);
          }
          break;
      }
    }
    if (!inds.empty()) {
      Formula atom = inds.front();
      inds.erase(inds.begin());
      const auto& terms = atom.lin().terms();
      auto it = std::find_if(terms.begin(), terms.end(), [](const LinTerm& t) { return t.kind == AtomKind::Ind; });
      LinExpr rest(atom.lin().constant());
      for (const auto& t : terms) {
        if (&t != &*it) rest.add_term(t.coeff, t.kind, t.arg);
      }
      if (step(have, {it->arg, lin_ge(rest + it->coeff)}, ors, inds)) return true;
      return step(have, {nnf(neg(it->arg)), lin_ge(rest)}, ors, inds);
    }
    while (!ors.empty()) {
      Formula o = ors.front();
      ors.erase(ors.begin());
      if (have.count(o.left()) || have.count(o.right())) continue;
      if (step(have, {o.left()}, ors, inds)) return true;
      return step(have, {o.right()}, ors, inds);
    }
    Branch b;
    for (Formula f : have) {
      const auto k = f.kind();
      if (k == FormulaKind::Prop || k == FormulaKind::Not) b.push_back(f);
      if (k == FormulaKind::LinGe && !f.lin().is_constant() && !(ind_ && has_ind(f))) b.push_back(f);
    }
    return fn_(b);
  }

  bool ind_;
  const BranchFn& fn_;
  std::size_t* counter_;
  std::size_t budget_;
  bool exhausted_ = false;
};

std::vector<std::string> positive_props(const Branch& b) {
  std::vector<std::string> out;
  for (Formula f : b) {
    if (f.kind() == FormulaKind::Prop) out.push_back(f.prop_name());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint32_t> key_of(std::vector<Formula>& gamma) {
  std::sort(gamma.begin(), gamma.end());
  gamma.erase(std::unique(gamma.begin(), gamma.end()), gamma.end());
  std::vector<std::uint32_t> key;
  key.reserve(gamma.size());
  for (Formula f : gamma) key.push_back(f.id());
  return key;
}

// Keeps only nodes reachable from the root, renumbered in discovery order.
Witness compact(const Witness& w) {
  std::unordered_map<std::size_t, std::size_t> index;
  std::vector<std::size_t> order{w.root};
  index.emplace(w.root, 0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const auto& [c, m] : w.nodes[order[i]].children) {
      if (index.emplace(c, order.size()).second) order.push_back(c);
    }
  }
  Witness out;
  out.root = 0;
  for (std::size_t old : order) {
    WitnessNode n = w.nodes[old];
    for (auto& [c, m] : n.children) c = index.at(c);
    out.nodes.push_back(std::move(n));
  }
  return out;
}

void check_no_gcount(Formula f) {
  if (contains_atom(f, AtomKind::GCount)) {
    throw InputError("satisfiability with #g is not supported (model checking only)");
  }
}

// Runs the soundness gates and materialises small witnesses.
void finish(SatResult& r, Formula f, Witness w, const SatOptions& opts, bool tree_shaped) {
  w = compact(w);
  if (!weighted_check(w, f)) throw std::logic_error("witness fails the input formula");
  const auto props = collect_props(f);
  std::vector<std::string> names(props.begin(), props.end());
  r.graph = w.materialize(names, opts.max_materialize, tree_shaped);
  if (r.graph && !model_check(r.graph->graph, r.graph->point, f)) {
    throw std::logic_error("materialised witness fails the input formula");
  }
  r.witness = std::move(w);
  r.verdict = Verdict::Sat;
}

class KSolver {
 public:
  KSolver(const SatOptions& opts, SatStats& stats) : opts_(opts), stats_(stats) {}

  std::optional<std::size_t> solve(std::vector<Formula> gamma) {
    auto key = key_of(gamma);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    ++stats_.calls;
    std::optional<std::size_t> result;
    BranchFn fn = [&](const Branch& b) {
      ++stats_.branches;
      std::set<Formula> diamonds;
      std::vector<Formula> boxes;
      for (Formula f : b) {
        if (f.kind() != FormulaKind::LinGe) continue;
        const ModalView v = view_as_modal(f);
        switch (v.shape) {
          case ModalShape::True: break;
          case ModalShape::False: return false;
          case ModalShape::Diamond: diamonds.insert(v.arg); break;
          case ModalShape::Box: boxes.push_back(v.arg); break;
          case ModalShape::Other: throw InputError("not a modal formula");
        }
      }
      WitnessNode node;
      node.props = positive_props(b);
      for (Formula d : diamonds) {
        std::vector<Formula> sub = boxes;
        sub.push_back(d);
        auto child = solve(std::move(sub));
        if (!child) return false;
        node.children.emplace_back(*child, BigInt(1));
      }
      w_.nodes.push_back(std::move(node));
      result = w_.nodes.size() - 1;
      return true;
    };
    Saturator s(false, fn, &budget_used_, opts_.call_budget);
    s.run(gamma);
    if (s.exhausted()) exhausted_ = true;
    memo_.emplace(std::move(key), result);
    return result;
  }

  Witness& witness() { return w_; }
  bool exhausted() const { return exhausted_; }

 private:
  const SatOptions& opts_;
  SatStats& stats_;
  Witness w_;
  std::map<std::vector<std::uint32_t>, std::optional<std::size_t>> memo_;
  std::size_t budget_used_ = 0;
  bool exhausted_ = false;
};

class KSharpSolver {
 public:
  KSharpSolver(const SatOptions& opts, SatStats& stats) : opts_(opts), stats_(stats) {}

  struct Outcome {
    Verdict verdict = Verdict::Unsat;
    std::size_t node = 0;
  };

  Outcome solve(std::vector<Formula> gamma) {
    auto key = key_of(gamma);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    ++stats_.calls;
    Outcome out;
    bool unknown = false;
    BranchFn fn = [&](const Branch& b) {
      ++stats_.branches;
      auto r = solve_branch(b);
      if (r.verdict == Verdict::Sat) {
        out = r;
        return true;
      }
      if (r.verdict == Verdict::Unknown) unknown = true;
      return false;
    };
    Saturator s(true, fn, &budget_used_, opts_.call_budget);
    s.run(gamma);
    if (s.exhausted()) {
      unknown = true;
      reason_ = "tableau call budget exhausted";
    }
    if (out.verdict != Verdict::Sat && unknown) out.verdict = Verdict::Unknown;
    memo_.emplace(std::move(key), out);
    return out;
  }

  Witness& witness() { return w_; }
  const std::string& reason() const { return reason_; }

 private:
  Outcome solve_branch(const Branch& b) {
    std::vector<Formula> atoms;
    std::vector<Formula> psi;
    for (Formula f : b) {
      if (f.kind() != FormulaKind::LinGe) continue;
      atoms.push_back(f);
      for (const auto& t : f.lin().terms()) psi.push_back(t.arg);
    }
    std::sort(psi.begin(), psi.end());
    psi.erase(std::unique(psi.begin(), psi.end()), psi.end());
    WitnessNode node;
    node.props = positive_props(b);
    if (atoms.empty()) return emit(std::move(node));

    const std::size_t d = psi.size();
    stats_.max_region_dim = std::max(stats_.max_region_dim, d);
    if (d > opts_.max_region_dim) {
      reason_ = "too many distinct counting atoms at one world";
      return {Verdict::Unknown, 0};
    }
    std::unordered_map<Formula, std::size_t> psi_index;
    for (std::size_t i = 0; i < d; ++i) psi_index.emplace(psi[i], i);

    // Region masks in {1, ..., 2^d - 1}; the empty region never affects a count.
    std::set<std::uint32_t> forbidden;
    std::map<std::uint32_t, std::size_t> child_of;
    bool unknown = false;
    const std::uint32_t full = (std::uint32_t{1} << d);
    while (true) {
      ++stats_.refinements;
      std::vector<std::uint32_t> regions;
      for (std::uint32_t m = 1; m < full; ++m) {
        if (!forbidden.count(m)) regions.push_back(m);
      }
      arith::QfpaProblem p;
      for (std::uint32_t m : regions) p.add_var("s" + std::to_string(m), true);
      std::vector<arith::QfpaFormula> rows;
      for (Formula a : atoms) {
        arith::LinearConstraint c;
        c.constant = a.lin().constant();
        for (const auto& t : a.lin().terms()) {
          const std::size_t i = psi_index.at(t.arg);
          for (std::size_t v = 0; v < regions.size(); ++v) {
            if (regions[v] >> i & 1) c.add(v, t.coeff);
          }
        }
        rows.push_back(arith::QfpaFormula::of(std::move(c)));
      }
      p.formula = arith::QfpaFormula::all(std::move(rows));
      ++stats_.ilp_calls;
      arith::QfpaOptions qo;
      qo.node_budget = opts_.node_budget;
      auto res = arith::qfpa_sat(p, qo);
      if (res.verdict == Verdict::Unsat) return {unknown ? Verdict::Unknown : Verdict::Unsat, 0};
      if (res.verdict == Verdict::Unknown) {
        reason_ = "integer backend: " + res.reason;
        return {Verdict::Unknown, 0};
      }
      std::vector<std::vector<long>> vectors;
      for (std::uint32_t m : regions) {
        std::vector<long> v(d);
        for (std::size_t i = 0; i < d; ++i) v[i] = m >> i & 1;
        vectors.push_back(std::move(v));
      }
      auto mult = arith::reduce_support(vectors, res.assignment);

      bool refined = false;
      std::size_t support = 0;
      for (std::size_t v = 0; v < regions.size(); ++v) {
        if (mult[v] == 0) continue;
        ++support;
        const std::uint32_t m = regions[v];
        if (child_of.count(m)) continue;
        std::vector<Formula> sub;
        for (std::size_t i = 0; i < d; ++i) sub.push_back((m >> i & 1) ? psi[i] : nnf(neg(psi[i])));
        auto child = solve(std::move(sub));
        if (child.verdict == Verdict::Sat) {
          child_of.emplace(m, child.node);
        } else {
          if (child.verdict == Verdict::Unknown) unknown = true;
          forbidden.insert(m);
          refined = true;
        }
      }
      if (refined) continue;
      stats_.max_support = std::max(stats_.max_support, support);
      for (std::size_t v = 0; v < regions.size(); ++v) {
        if (mult[v] != 0) node.children.emplace_back(child_of.at(regions[v]), mult[v]);
      }
      return emit(std::move(node));
    }
  }

  Outcome emit(WitnessNode node) {
    w_.nodes.push_back(std::move(node));
    return {Verdict::Sat, w_.nodes.size() - 1};
  }

  const SatOptions& opts_;
  SatStats& stats_;
  Witness w_;
  std::map<std::vector<std::uint32_t>, Outcome> memo_;
  std::size_t budget_used_ = 0;
  std::string reason_;
};

}  // namespace

std::vector<Branch> saturate_boolean(const std::vector<Formula>& gamma) {
  std::vector<Branch> out;
  BranchFn fn = [&](const Branch& b) {
    out.push_back(b);
    return false;
  };
  Saturator(false, fn, nullptr, 0).run(gamma);
  return out;
}

bool is_modal(Formula f) {
  std::set<std::uint32_t> seen;
  std::function<bool(Formula)> rec = [&](Formula g) {
    if (!seen.insert(g.id()).second) return true;
    switch (g.kind()) {
      case FormulaKind::Prop: return true;
      case FormulaKind::Not: return rec(g.operand());
      case FormulaKind::And:
      case FormulaKind::Or: return rec(g.left()) && rec(g.right());
      case FormulaKind::LinGe: {
        const ModalView v = view_as_modal(g);
        if (v.shape == ModalShape::Other) return false;
        for (const auto& t : g.lin().terms()) {
          if (!rec(t.arg)) return false;
        }
        return true;
      }
    }
    return false;
  };
  return rec(f);
}

std::size_t diamond_count(Formula f) {
  std::set<std::uint32_t> seen;
  std::set<std::uint32_t> diamonds;
  std::function<void(Formula)> rec = [&](Formula g) {
    if (!seen.insert(g.id()).second) return;
    switch (g.kind()) {
      case FormulaKind::Prop: return;
      case FormulaKind::Not: return rec(g.operand());
      case FormulaKind::And:
      case FormulaKind::Or:
        rec(g.left());
        rec(g.right());
        return;
      case FormulaKind::LinGe: {
        const ModalView view = view_as_modal(g);
        if (view.shape == ModalShape::Diamond) diamonds.insert(g.id());
        if (view.shape == ModalShape::Diamond || view.shape == ModalShape::Box) return rec(view.arg);
        for (const auto& t : g.lin().terms()) rec(t.arg);
        return;
      }
    }
  };
  rec(nnf(f));
  return diamonds.size();
}

SatResult sat_k(Formula f, const SatOptions& opts) {
  const Formula g = nnf(f);
  if (!is_modal(g)) throw InputError("sat_k expects a modal formula (diamonds and boxes only)");
  SatResult r;
  KSolver solver(opts, r.stats);
  auto root = solver.solve({g});
  if (root) {
    solver.witness().root = *root;
    finish(r, f, solver.witness(), opts, true);
  } else if (solver.exhausted()) {
    r.verdict = Verdict::Unknown;
    r.reason = "tableau call budget exhausted";
  } else {
    r.verdict = Verdict::Unsat;
  }
  return r;
}

SatResult sat_ksharp(Formula f, const SatOptions& opts) {
  check_no_gcount(f);
  const Formula g = nnf(f);
  SatResult r;
  KSharpSolver solver(opts, r.stats);
  auto out = solver.solve({g});
  if (out.verdict == Verdict::Sat) {
    solver.witness().root = out.node;
    finish(r, f, solver.witness(), opts, false);
  } else {
    r.verdict = out.verdict;
    if (out.verdict == Verdict::Unknown) r.reason = solver.reason();
  }
  return r;
}

}  // namespace gnnv::sat
