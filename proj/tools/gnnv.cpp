#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gnnv/errors.hpp"
#include "gnnv/formula_io.hpp"
#include "gnnv/gnn_expr.hpp"
#include "gnnv/graph_io.hpp"
#include "gnnv/model_check.hpp"
#include "gnnv/qbf.hpp"
#include "gnnv/qfbapa.hpp"
#include "gnnv/sat.hpp"
#include "gnnv/verify.hpp"
#include "gnnv/wl.hpp"

using json = nlohmann::json;
using namespace gnnv;

namespace {

constexpr int kAnswered = 0;
constexpr int kInputError = 2;
constexpr int kUnknown = 3;

json number(const BigInt& v) {
  if (fits_int64(v)) return to_int64(v);
  return v.get_str();
}

Vertex vertex_arg(const LabelledGraph& g, long v) {
  if (v < 0 || static_cast<std::size_t>(v) >= g.size()) throw InputError("vertex out of range: " + std::to_string(v));
  return static_cast<Vertex>(v);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

// Linear atoms evaluated at the vertex itself, i.e. not under a counting term.
void collect_local_atoms(Formula f, std::vector<Formula>& out) {
  switch (f.kind()) {
    case FormulaKind::Prop: return;
    case FormulaKind::Not: return collect_local_atoms(f.operand(), out);
    case FormulaKind::And:
    case FormulaKind::Or:
      collect_local_atoms(f.left(), out);
      collect_local_atoms(f.right(), out);
      return;
    case FormulaKind::LinGe:
      if (!f.lin().is_constant()) out.push_back(f);
      return;
  }
}

struct WitnessFlags {
  std::string format = "json";
  std::string out;
};

void add_witness_flags(CLI::App* cmd, WitnessFlags& w) {
  cmd->add_option("--witness", w.format, "witness output")->check(CLI::IsMember({"json", "dot", "none"}));
  cmd->add_option("--out", w.out, "file for the DOT witness");
}

json witness_json(const sat::SatResult& r, const WitnessFlags& flags) {
  if (!r.witness || flags.format == "none") return nullptr;
  if (flags.format == "dot") {
    if (!r.graph) throw InputError("witness too large to draw; use --witness json");
    if (flags.out.empty()) throw InputError("--witness dot needs --out PATH");
    write_file(flags.out, graph_to_dot(r.graph->graph, r.graph->point));
    return json{{"dot", flags.out}};
  }
  if (r.graph) return json{{"graph", json::parse(print_graph(r.graph->graph))}, {"root", r.graph->point}};
  return json{{"symbolic", json::parse(sat::witness_to_json(*r.witness))}};
}

json stats_json(const sat::SatStats& s) {
  return json{{"tableau_calls", s.calls},    {"branches", s.branches},      {"ilp_calls", s.ilp_calls},
              {"refinements", s.refinements}, {"max_regions", s.max_support}, {"max_counting_atoms", s.max_region_dim}};
}

int cmd_mc(const std::string& graph_path, long vertex, const std::string& text) {
  const LabelledGraph g = load_graph_file(graph_path);
  const Vertex u = vertex_arg(g, vertex);
  const Formula f = parse_formula(text);
  ModelChecker mc(g);
  std::vector<Formula> atoms;
  collect_local_atoms(f, atoms);
  json lin = json::object();
  for (Formula a : atoms) lin[print_lin(a.lin())] = number(mc.eval_lin(u, a.lin()));
  std::cout << json{{"value", mc.holds(u, f)}, {"lin_values", lin}}.dump() << "\n";
  return kAnswered;
}

int cmd_sat(const std::string& text, const std::string& logic, const WitnessFlags& wf, std::optional<std::size_t> budget) {
  const Formula f = parse_formula(text);
  sat::SatOptions opts;
  if (budget) opts.node_budget = opts.call_budget = *budget;
  const sat::SatResult r = logic == "k" ? sat::sat_k(f, opts) : sat::sat_ksharp(f, opts);
  json out{{"verdict", sat::verdict_name(r.verdict)}, {"logic", logic}, {"stats", stats_json(r.stats)}};
  if (!r.reason.empty()) out["reason"] = r.reason;
  if (r.verdict == sat::Verdict::Sat) {
    if (json w = witness_json(r, wf); !w.is_null()) out["witness"] = w;
  }
  std::cout << out.dump() << "\n";
  return r.verdict == sat::Verdict::Unknown ? kUnknown : kAnswered;
}

int cmd_verify(const std::string& path, const std::string& task, const std::string& spec, const WitnessFlags& wf,
               std::optional<std::size_t> budget) {
  const GnnModel n = load_gnn_file(path);
  std::optional<Formula> phi;
  if (!spec.empty()) phi = parse_formula(spec);
  sat::SatOptions opts;
  if (budget) opts.node_budget = opts.call_budget = *budget;
  Report r = verify(n, phi, parse_task(task), opts);
  json out = json::parse(report_to_json(r, n));
  if (r.witness && wf.format != "json") {
    out.erase("counterexample");
    out.erase("example");
    if (json w = witness_json(*r.witness, wf); !w.is_null()) {
      out[r.verdict == Outcome::Fails ? "counterexample" : "example"] = w;
    }
  }
  std::cout << out.dump() << "\n";
  return r.verdict == Outcome::Unknown ? kUnknown : kAnswered;
}

int cmd_translate(const std::string& direction, const std::string& input, const std::vector<std::string>& names) {
  if (direction == "gnn-to-ksharp") {
    const GnnModel n = load_gnn_file(input);
    const Formula f = gnn_to_ksharp(n);
    std::cout << json{{"formula", print_formula(f)},
                      {"modal_depth", modal_depth(f)},
                      {"common_denominator", number(common_denominator(n))},
                      {"expression", print_gnn_expr(gnn_to_expr(n), n.prop_names())}}
                     .dump()
              << "\n";
    return kAnswered;
  }
  if (direction != "ksharp-to-gnn") throw InputError("unknown direction: " + direction);
  const Formula f = parse_formula(input);
  std::vector<std::string> features = names;
  if (features.empty()) {
    const auto props = collect_props(f);
    features.assign(props.begin(), props.end());
  }
  const GnnModel n = ksharp_to_gnn(f, features);
  std::cout << json{{"gnn", json::parse(print_gnn(n))}, {"expression", print_gnn_expr(tr(f, features), features)}}.dump()
            << "\n";
  return kAnswered;
}

json partition_json(const std::vector<wl::ColorId>& colors) {
  std::map<wl::ColorId, std::vector<Vertex>> classes;
  for (Vertex u = 0; u < colors.size(); ++u) classes[colors[u]].push_back(u);
  json parts = json::array();
  json hist = json::object();
  for (const auto& [c, vs] : classes) {
    parts.push_back(vs);
    hist[std::to_string(c)] = vs.size();
  }
  return json{{"classes", classes.size()}, {"partition", parts}, {"histogram", hist}};
}

int cmd_wl_cr(const std::string& path, std::optional<std::size_t> rounds) {
  const LabelledGraph g = load_graph_file(path);
  json out;
  if (rounds) {
    wl::Coloring c = wl::initial_coloring(g);
    for (std::size_t t = 0; t < *rounds; ++t) c = wl::refine(g, c);
    out = partition_json(c.assignment);
    out["rounds"] = *rounds;
  } else {
    const auto trace = wl::color_refinement(g);
    out = partition_json(trace.stable().assignment);
    out["rounds"] = trace.stable_round;
  }
  std::cout << out.dump() << "\n";
  return kAnswered;
}

int cmd_wl_compare(const std::string& p1, const std::string& p2, const std::string& test) {
  const LabelledGraph g = load_graph_file(p1);
  const LabelledGraph h = load_graph_file(p2);
  bool same = false;
  if (test == "cr") {
    same = wl::cr_indist_graphs(g, h);
  } else {
    same = wl::pair_indist_graphs(g, h, test == "owl2" ? wl::PairTest::Owl2 : wl::PairTest::Fwl2);
  }
  std::cout << json{{"test", test}, {"indistinguishable", same}}.dump() << "\n";
  return kAnswered;
}

int cmd_wl_charform(const std::string& path, long vertex, std::size_t rounds) {
  const LabelledGraph g = load_graph_file(path);
  const Formula f = wl::characteristic_formula(g, vertex_arg(g, vertex), rounds);
  std::cout << json{{"formula", print_formula(f)}, {"modal_depth", modal_depth(f)}, {"rounds", rounds}}.dump() << "\n";
  return kAnswered;
}

int cmd_qfbapa(const std::string& text, bool naive) {
  const auto f = arith::parse_qfbapa(text);
  const auto r = naive ? arith::qfbapa_sat_naive(f) : arith::qfbapa_sat(f);
  json out{{"verdict", arith::verdict_name(r.verdict)}, {"oracle", naive ? "naive" : "regions"},
           {"d", r.d},   {"e", r.e}, {"n_max", r.n_max}};
  if (!r.reason.empty()) out["reason"] = r.reason;
  if (r.verdict == arith::Verdict::Sat) {
    json regions = json::array();
    for (const auto& [code, size] : r.model.regions) {
      if (size == 0) continue;
      std::string bits;
      for (bool b : code) bits += b ? '1' : '0';
      regions.push_back(json{{"region", bits}, {"size", number(size)}});
    }
    json ints = json::object();
    for (const auto& [name, v] : r.model.ints) ints[name] = number(v);
    out["model"] = json{{"set_vars", r.model.set_vars},
                        {"regions", regions},
                        {"ints", ints},
                        {"domain_size", number(r.model.domain_size())}};
    out["support"] = r.support;
  }
  std::cout << out.dump() << "\n";
  return r.verdict == arith::Verdict::Unknown ? kUnknown : kAnswered;
}

int cmd_gen_tqbf(const std::string& text) {
  const auto q = sat::parse_qbf(text);
  const Formula f = sat::tqbf_to_k(q);
  std::cout << json{{"qbf", sat::print_qbf(q)}, {"value", sat::qbf_eval(q)}, {"formula", print_formula(f)}}.dump()
            << "\n";
  return kAnswered;
}

int cmd_gen_graph(std::size_t n, const std::string& p, std::size_t dim, std::uint64_t seed) {
  const Rational prob = parse_rational(p);
  if (prob < 0 || prob > 1) throw InputError("edge probability must lie in [0, 1]");
  std::cout << print_graph(random_graph(n, prob, dim, true, seed)) << "\n";
  return kAnswered;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification toolkit for graph neural networks and counting modal logic"};
  app.require_subcommand(1);
  std::function<int()> action;

  std::string graph_path, formula_text;
  long vertex = 0;
  auto* mc = app.add_subcommand("mc", "model check a formula at a vertex");
  mc->add_option("GRAPH", graph_path)->required();
  mc->add_option("VERTEX", vertex)->required();
  mc->add_option("FORMULA", formula_text)->required();
  mc->callback([&] { action = [&] { return cmd_mc(graph_path, vertex, formula_text); }; });

  std::string logic = "ksharp";
  WitnessFlags wf;
  std::optional<std::size_t> budget;
  auto* sat = app.add_subcommand("sat", "satisfiability in K or K#");
  sat->add_option("FORMULA", formula_text)->required();
  sat->add_option("--logic", logic)->check(CLI::IsMember({"k", "ksharp"}));
  add_witness_flags(sat, wf);
  sat->add_option("--budget", budget, "search node budget");
  sat->callback([&] { action = [&] { return cmd_sat(formula_text, logic, wf, budget); }; });

  std::string gnn_path, task, spec;
  auto* ver = app.add_subcommand("verify", "verify a GNN against a specification");
  ver->add_option("GNN", gnn_path)->required();
  ver->add_option("--task", task)->required()->check(
      CLI::IsMember({"nonempty", "equiv", "n-sub-phi", "phi-sub-n", "consistent"}));
  ver->add_option("--spec", spec);
  add_witness_flags(ver, wf);
  ver->add_option("--budget", budget, "search node budget");
  ver->callback([&] { action = [&] { return cmd_verify(gnn_path, task, spec, wf, budget); }; });

  std::string direction, input;
  std::vector<std::string> names;
  auto* tr = app.add_subcommand("translate", "translate between GNNs and K#");
  tr->add_option("DIRECTION", direction)->required()->check(CLI::IsMember({"gnn-to-ksharp", "ksharp-to-gnn"}));
  tr->add_option("INPUT", input)->required();
  tr->add_option("--features", names, "feature names for ksharp-to-gnn");
  tr->callback([&] { action = [&] { return cmd_translate(direction, input, names); }; });

  auto* wlc = app.add_subcommand("wl", "colour refinement and pair tests");
  wlc->require_subcommand(1);
  std::optional<std::size_t> rounds;
  auto* cr = wlc->add_subcommand("cr", "colour refinement");
  cr->add_option("GRAPH", graph_path)->required();
  cr->add_option("--rounds", rounds);
  cr->callback([&] { action = [&] { return cmd_wl_cr(graph_path, rounds); }; });
  std::string graph2, test = "cr";
  auto* cmp = wlc->add_subcommand("compare", "compare two graphs");
  cmp->add_option("G1", graph_path)->required();
  cmp->add_option("G2", graph2)->required();
  cmp->add_option("--test", test)->check(CLI::IsMember({"cr", "owl2", "fwl2"}));
  cmp->callback([&] { action = [&] { return cmd_wl_compare(graph_path, graph2, test); }; });
  std::size_t charform_rounds = 0;
  auto* cf = wlc->add_subcommand("charform", "characteristic formula of a vertex");
  cf->add_option("GRAPH", graph_path)->required();
  cf->add_option("VERTEX", vertex)->required();
  cf->add_option("--rounds", charform_rounds)->required();
  cf->callback([&] { action = [&] { return cmd_wl_charform(graph_path, vertex, charform_rounds); }; });

  std::string oracle;
  auto* qf = app.add_subcommand("qfbapa", "QFBAPA satisfiability");
  qf->add_option("FORMULA", formula_text)->required();
  qf->add_option("--oracle", oracle)->check(CLI::IsMember({"naive"}));
  qf->callback([&] { action = [&] { return cmd_qfbapa(formula_text, oracle == "naive"); }; });

  auto* gen = app.add_subcommand("gen", "instance generators");
  gen->require_subcommand(1);
  std::string qbf_text;
  auto* gq = gen->add_subcommand("tqbf", "modal encoding of a QBF");
  gq->add_option("QBF", qbf_text)->required();
  gq->callback([&] { action = [&] { return cmd_gen_tqbf(qbf_text); }; });
  std::size_t gn = 0, gdim = 0;
  std::string gp;
  std::uint64_t gseed = 0;
  auto* gg = gen->add_subcommand("random-graph", "random Boolean graph");
  gg->add_option("N", gn)->required();
  gg->add_option("P", gp)->required();
  gg->add_option("DIM", gdim)->required();
  gg->add_option("SEED", gseed)->required();
  gg->callback([&] { action = [&] { return cmd_gen_graph(gn, gp, gdim, gseed); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kAnswered : kInputError;
  }
  try {
    return action();
  } catch (const InputError& e) {
    std::cout << json{{"error", e.what()}}.dump() << "\n";
    return kInputError;
  } catch (const LimitExceeded& e) {
    std::cout << json{{"verdict", "unknown"}, {"reason", e.what()}}.dump() << "\n";
    return kUnknown;
  }
}
