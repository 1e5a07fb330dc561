#include "gnnv/verify.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <unordered_map>
#include <stdexcept>

#include "gnnv/errors.hpp"
#include "gnnv/formula_io.hpp"
#include "gnnv/gnn_expr.hpp"
#include "gnnv/graph_io.hpp"
#include "gnnv/model_check.hpp"
#include "json_util.hpp"

namespace gnnv {

Formula gnn_to_ksharp(const GnnModel& n) {
  n.validate();
  const auto names = n.prop_names();
  return tr_prime_scaled(gnn_to_expr(n), common_denominator(n), names);
}

GnnModel ksharp_to_gnn(Formula f, const std::vector<std::string>& names) {
  if (contains_atom(f, AtomKind::GCount)) throw InputError("#g has no aggregate-combine counterpart");
  std::vector<Formula> subs;
  std::unordered_map<Formula, std::size_t> index;
  std::unordered_map<Formula, std::size_t> height;
  std::function<std::size_t(Formula)> visit = [&](Formula g) -> std::size_t {
    if (auto it = height.find(g); it != height.end()) return it->second;
    std::size_t h = 0;
    switch (g.kind()) {
      case FormulaKind::Prop: break;
      case FormulaKind::Not: h = visit(g.operand()) + 1; break;
      case FormulaKind::And:
      case FormulaKind::Or: h = std::max(visit(g.left()), visit(g.right())) + 1; break;
      case FormulaKind::LinGe:
        h = 1;
        for (const auto& t : g.lin().terms()) h = std::max(h, visit(t.arg) + 1);
        break;
    }
    index.emplace(g, subs.size());
    subs.push_back(g);
    height.emplace(g, h);
    return h;
  };
  const std::size_t depth = visit(f);
  const std::size_t d = subs.size();
  auto zero = [](std::size_t r, std::size_t c) { return Matrix(r, std::vector<Rational>(c)); };

  GnnModel m;
  m.input_dim = names.size();
  m.feature_names = names;
  // The first layer only copies features into proposition coordinates.
  GnnLayer first{zero(d, names.size()), zero(d, names.size()), std::vector<Rational>(d)};
  for (std::size_t i = 0; i < d; ++i) {
    if (subs[i].kind() != FormulaKind::Prop) continue;
    auto it = std::find(names.begin(), names.end(), subs[i].prop_name());
    if (it != names.end()) first.A[i][it - names.begin()] = 1;
  }
  m.layers.push_back(std::move(first));
  GnnLayer step{zero(d, d), zero(d, d), std::vector<Rational>(d)};
  for (std::size_t i = 0; i < d; ++i) {
    const Formula g = subs[i];
    switch (g.kind()) {
      case FormulaKind::Prop: step.A[i][i] = 1; break;
      case FormulaKind::Not:
        step.A[i][index.at(g.operand())] -= 1;
        step.b[i] = 1;
        break;
      case FormulaKind::And:
        step.A[i][index.at(g.left())] += 1;
        step.A[i][index.at(g.right())] += 1;
        step.b[i] = -1;
        break;
      case FormulaKind::Or:
        step.A[i][index.at(g.left())] += 1;
        step.A[i][index.at(g.right())] += 1;
        break;
      case FormulaKind::LinGe:
        // Integer xi >= 0 iff truncReLU(xi + 1) = 1.
        step.b[i] = Rational(g.lin().constant() + 1);
        for (const auto& t : g.lin().terms()) {
          Matrix& target = t.kind == AtomKind::Ind ? step.A : step.B;
          target[i][index.at(t.arg)] += Rational(t.coeff);
        }
        break;
    }
  }
  for (std::size_t l = 0; l < std::max<std::size_t>(depth, 1); ++l) m.layers.push_back(step);
  m.readout_w.assign(d, Rational(0));
  m.readout_w[index.at(f)] = 1;
  m.readout_b = -1;
  m.validate();
  return m;
}

Task parse_task(const std::string& name) {
  if (name == "nonempty") return Task::NonEmpty;
  if (name == "equiv") return Task::Equiv;
  if (name == "n-sub-phi") return Task::NSubPhi;
  if (name == "phi-sub-n") return Task::PhiSubN;
  if (name == "consistent") return Task::Consistent;
  throw InputError("unknown task: " + name);
}

const char* task_name(Task t) {
  switch (t) {
    case Task::NonEmpty: return "nonempty";
    case Task::Equiv: return "equiv";
    case Task::NSubPhi: return "n-sub-phi";
    case Task::PhiSubN: return "phi-sub-n";
    case Task::Consistent: return "consistent";
  }
  return "?";
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Holds: return "holds";
    case Outcome::Fails: return "fails";
    case Outcome::Unknown: return "unknown";
  }
  return "?";
}

namespace {

void accumulate(sat::SatStats& into, const sat::SatStats& s) {
  into.calls += s.calls;
  into.branches += s.branches;
  into.ilp_calls += s.ilp_calls;
  into.refinements += s.refinements;
  into.max_support = std::max(into.max_support, s.max_support);
  into.max_region_dim = std::max(into.max_region_dim, s.max_region_dim);
}

// The witness graph restricted to the model's input features.
LabelledGraph project(const LabelledGraph& g, const GnnModel& n) {
  const auto names = n.prop_names();
  std::vector<Label> labels;
  for (Vertex u = 0; u < g.size(); ++u) {
    Label l(names.size());
    for (std::size_t j = 0; j < names.size(); ++j) {
      if (auto idx = g.prop_index(names[j])) l[j] = g.label(u)[*idx];
    }
    labels.push_back(std::move(l));
  }
  return LabelledGraph(g.size(), names.size(), std::move(labels), g.edges(), names);
}

// The witness must satisfy the query formula and the model's own verdict
// must match the side of the query it claims.
void cross_check(const sat::SatResult& r, Formula query, const GnnModel& n, std::optional<bool> accepted) {
  if (!sat::weighted_check(*r.witness, query)) throw std::logic_error("verification witness fails its formula");
  if (!r.graph || !accepted) return;
  if (!model_check(r.graph->graph, r.graph->point, query)) {
    throw std::logic_error("verification witness graph fails its formula");
  }
  if (forward(n, project(r.graph->graph, n)).accept[r.graph->point] != *accepted) {
    throw std::logic_error("verification witness disagrees with the model");
  }
}

}  // namespace

Report verify(const GnnModel& n, std::optional<Formula> spec, Task task, const sat::SatOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  if (task != Task::NonEmpty && !spec) throw InputError(std::string("task ") + task_name(task) + " needs --spec");
  Report rep;
  rep.task = task;
  const Formula phi_n = gnn_to_ksharp(n);

  // Each query is a formula, the verdict when it is satisfiable, and the
  // model's expected output on a witness.
  struct Query {
    Formula f;
    bool sat_means_holds;
    bool accepted;
  };
  std::vector<Query> queries;
  switch (task) {
    case Task::NonEmpty: queries.push_back({phi_n, true, true}); break;
    case Task::Consistent: queries.push_back({conj(*spec, phi_n), true, true}); break;
    case Task::PhiSubN: queries.push_back({conj(*spec, neg(phi_n)), false, false}); break;
    case Task::NSubPhi: queries.push_back({conj(phi_n, neg(*spec)), false, true}); break;
    case Task::Equiv:
      queries.push_back({conj(*spec, neg(phi_n)), false, false});
      queries.push_back({conj(phi_n, neg(*spec)), false, true});
      break;
  }

  bool unknown = false;
  rep.verdict = Outcome::Holds;
  for (const auto& q : queries) {
    const Formula f = nnf(q.f);
    auto r = sat::sat_ksharp(f, opts);
    accumulate(rep.stats, r.stats);
    if (r.verdict == sat::Verdict::Unknown) {
      unknown = true;
      rep.reason = r.reason;
      continue;
    }
    const bool satisfiable = r.verdict == sat::Verdict::Sat;
    if (satisfiable) cross_check(r, f, n, q.accepted);
    if (satisfiable != q.sat_means_holds) {
      rep.verdict = Outcome::Fails;
      rep.decided_by = f;
      if (satisfiable) rep.witness = std::move(r);
      break;
    }
    rep.decided_by = f;
    if (satisfiable) rep.witness = std::move(r);
  }
  if (rep.verdict != Outcome::Fails && unknown) {
    rep.verdict = Outcome::Unknown;
    rep.witness.reset();
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::string report_to_json(const Report& r, const GnnModel& n) {
  json out{{"task", task_name(r.task)}, {"verdict", outcome_name(r.verdict)}};
  out["stats"] = json{{"seconds", r.seconds},        {"tableau_calls", r.stats.calls},
                      {"branches", r.stats.branches}, {"ilp_calls", r.stats.ilp_calls},
                      {"refinements", r.stats.refinements}, {"max_regions", r.stats.max_support}};
  if (!r.reason.empty()) out["reason"] = r.reason;
  if (r.witness && r.witness->witness) {
    json w;
    if (r.witness->graph) {
      w["graph"] = json::parse(print_graph(r.witness->graph->graph));
      w["root"] = r.witness->graph->point;
      w["accepted"] = bool(forward(n, project(r.witness->graph->graph, n)).accept[r.witness->graph->point]);
    } else {
      w["symbolic"] = json::parse(sat::witness_to_json(*r.witness->witness));
    }
    out[r.verdict == Outcome::Fails ? "counterexample" : "example"] = w;
  }
  return out.dump();
}

}  // namespace gnnv
