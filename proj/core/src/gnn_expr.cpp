#include "gnnv/gnn_expr.hpp"

#include <functional>

#include "gnnv/errors.hpp"

namespace gnnv {

namespace {

GnnExpr make(GnnExprKind kind, Rational value, std::size_t feature, GnnExpr a, GnnExpr b) {
  return std::make_shared<const GnnExprNode>(
      GnnExprNode{kind, std::move(value), feature, std::move(a), std::move(b)});
}

}  // namespace

GnnExpr gconst(Rational c) { return make(GnnExprKind::Const, std::move(c), 0, nullptr, nullptr); }
GnnExpr gfeature(std::size_t i) { return make(GnnExprKind::Feature, 0, i, nullptr, nullptr); }
GnnExpr gact(GnnExpr e) { return make(GnnExprKind::Act, 0, 0, std::move(e), nullptr); }
GnnExpr gagg(GnnExpr e) { return make(GnnExprKind::Agg, 0, 0, std::move(e), nullptr); }
GnnExpr gsum(GnnExpr a, GnnExpr b) { return make(GnnExprKind::Sum, 0, 0, std::move(a), std::move(b)); }
GnnExpr gscale(Rational c, GnnExpr e) { return make(GnnExprKind::Scale, std::move(c), 0, std::move(e), nullptr); }

bool well_formed_for_translation(const GnnExpr& e) {
  std::unordered_map<const GnnExprNode*, bool> memo;
  std::function<bool(const GnnExpr&)> rec = [&](const GnnExpr& x) -> bool {
    if (!x) return true;
    if (auto it = memo.find(x.get()); it != memo.end()) return it->second;
    bool ok = rec(x->a) && rec(x->b);
    if (x->kind == GnnExprKind::Agg && x->a->kind != GnnExprKind::Act) ok = false;
    memo.emplace(x.get(), ok);
    return ok;
  };
  return rec(e);
}

namespace {

class DepthCache {
 public:
  std::size_t depth(const GnnExpr& x) {
    if (!x) return 0;
    if (auto it = memo_.find(x.get()); it != memo_.end()) return it->second;
    std::size_t d = std::max(depth(x->a), depth(x->b));
    if (x->kind == GnnExprKind::Act) d += 1;
    memo_.emplace(x.get(), d);
    return d;
  }

 private:
  std::unordered_map<const GnnExprNode*, std::size_t> memo_;
};

struct Part {
  Rational coeff;
  GnnExpr base;  // null for a constant
};

void flatten(const GnnExpr& e, const Rational& c, std::vector<Part>& out) {
  switch (e->kind) {
    case GnnExprKind::Sum:
      flatten(e->a, c, out);
      flatten(e->b, c, out);
      return;
    case GnnExprKind::Scale:
      flatten(e->a, c * e->value, out);
      return;
    case GnnExprKind::Const:
      out.push_back({c * e->value, nullptr});
      return;
    default:
      out.push_back({c, e});
  }
}

std::string print_rec(const GnnExpr& e, std::span<const std::string> names);

std::string print_base(const GnnExpr& e, std::span<const std::string> names) {
  switch (e->kind) {
    case GnnExprKind::Feature:
      return e->feature < names.size() ? names[e->feature] : default_prop_name(e->feature);
    case GnnExprKind::Act: return "trunc(" + print_rec(e->a, names) + ")";
    case GnnExprKind::Agg: return "agg(" + print_rec(e->a, names) + ")";
    default: return "(" + print_rec(e, names) + ")";
  }
}

std::string print_rec(const GnnExpr& e, std::span<const std::string> names) {
  std::vector<Part> parts;
  flatten(e, 1, parts);
  std::string out;
  for (const auto& p : parts) {
    if (p.coeff == 0 && parts.size() > 1) continue;
    const bool negative = p.coeff < 0;
    Rational mag = abs(p.coeff);
    std::string body;
    if (!p.base) body = to_string(mag);
    else if (mag == 1) body = print_base(p.base, names);
    else body = to_string(mag) + "*" + print_base(p.base, names);
    if (out.empty()) out = negative ? "-" + body : body;
    else out += (negative ? " - " : " + ") + body;
  }
  return out.empty() ? "0" : out;
}

}  // namespace

std::size_t act_depth(const GnnExpr& e) { return DepthCache().depth(e); }

std::string print_gnn_expr(const GnnExpr& e, std::span<const std::string> names) { return print_rec(e, names); }

const std::vector<Rational>& GnnExprEvaluator::values(const GnnExpr& e) {
  if (auto it = memo_.find(e.get()); it != memo_.end()) return it->second;
  keep_alive_.push_back(e);
  const std::size_t n = g_.size();
  std::vector<Rational> out(n);
  switch (e->kind) {
    case GnnExprKind::Const:
      for (auto& x : out) x = e->value;
      break;
    case GnnExprKind::Feature:
      if (e->feature >= g_.dim()) throw InputError("feature index " + std::to_string(e->feature) + " out of range");
      for (Vertex u = 0; u < n; ++u) out[u] = g_.label(u)[e->feature];
      break;
    case GnnExprKind::Act: {
      const auto& a = values(e->a);
      for (Vertex u = 0; u < n; ++u) out[u] = truncrelu(a[u]);
      break;
    }
    case GnnExprKind::Agg: {
      const auto& a = values(e->a);
      for (Vertex u = 0; u < n; ++u) {
        for (Vertex v : g_.successors(u)) out[u] += a[v];
      }
      break;
    }
    case GnnExprKind::Sum: {
      const auto& a = values(e->a);
      const auto& b = values(e->b);
      for (Vertex u = 0; u < n; ++u) out[u] = a[u] + b[u];
      break;
    }
    case GnnExprKind::Scale: {
      const auto& a = values(e->a);
      for (Vertex u = 0; u < n; ++u) out[u] = e->value * a[u];
      break;
    }
  }
  return memo_.emplace(e.get(), std::move(out)).first->second;
}

Rational eval_gnn_expr(const LabelledGraph& g, Vertex u, const GnnExpr& e) {
  if (u >= g.size()) throw InputError("vertex out of range");
  return GnnExprEvaluator(g).values(e)[u];
}

namespace {

GnnExpr lincomb(const std::vector<std::pair<Rational, GnnExpr>>& terms, const Rational& constant) {
  GnnExpr acc;
  auto add = [&](GnnExpr x) { acc = acc ? gsum(acc, std::move(x)) : std::move(x); };
  for (const auto& [c, x] : terms) {
    if (c == 0) continue;
    add(c == 1 ? x : gscale(c, x));
  }
  if (constant != 0 || !acc) add(gconst(constant));
  return acc;
}

}  // namespace

GnnExpr gnn_to_expr(const GnnModel& n) {
  n.validate();
  std::vector<GnnExpr> psi, agg_src;
  for (std::size_t j = 0; j < n.input_dim; ++j) {
    psi.push_back(gfeature(j));
    agg_src.push_back(gact(psi.back()));
  }
  for (const auto& L : n.layers) {
    std::vector<GnnExpr> aggs;
    for (const auto& src : agg_src) aggs.push_back(gagg(src));
    std::vector<GnnExpr> next;
    for (std::size_t i = 0; i < L.b.size(); ++i) {
      std::vector<std::pair<Rational, GnnExpr>> terms;
      for (std::size_t j = 0; j < psi.size(); ++j) terms.emplace_back(L.A[i][j], psi[j]);
      for (std::size_t j = 0; j < psi.size(); ++j) terms.emplace_back(L.B[i][j], aggs[j]);
      next.push_back(gact(lincomb(terms, L.b[i])));
    }
    psi = next;
    agg_src = next;
  }
  BigInt s = n.readout_b.get_den();
  for (const auto& w : n.readout_w) s = lcm(s, w.get_den());
  std::vector<std::pair<Rational, GnnExpr>> terms;
  for (std::size_t i = 0; i < psi.size(); ++i) terms.emplace_back(Rational(s) * n.readout_w[i], psi[i]);
  return lincomb(terms, Rational(s) * n.readout_b + 1);
}

namespace {

class TrBuilder {
 public:
  explicit TrBuilder(std::span<const std::string> names) : names_(names) {}

  GnnExpr formula(Formula f) {
    if (auto it = memo_.find(f); it != memo_.end()) return it->second;
    GnnExpr out;
    switch (f.kind()) {
      case FormulaKind::Prop: {
        out = gconst(0);
        for (std::size_t i = 0; i < names_.size(); ++i) {
          if (names_[i] == f.prop_name()) out = gfeature(i);
        }
        break;
      }
      case FormulaKind::Not:
        out = gsum(gconst(1), gscale(-1, gact(formula(f.operand()))));
        break;
      case FormulaKind::And:
        out = gact(gsum(gsum(formula(f.left()), formula(f.right())), gconst(-1)));
        break;
      case FormulaKind::Or:
        out = gact(gsum(formula(f.left()), formula(f.right())));
        break;
      case FormulaKind::LinGe: {
        std::vector<std::pair<Rational, GnnExpr>> terms;
        for (const auto& t : f.lin().terms()) {
          switch (t.kind) {
            case AtomKind::Ind: terms.emplace_back(Rational(t.coeff), formula(t.arg)); break;
            case AtomKind::Count: terms.emplace_back(Rational(t.coeff), gagg(formula(t.arg))); break;
            case AtomKind::GCount:
              throw InputError("global counting #g has no GNN translation");
          }
        }
        out = gact(lincomb(terms, Rational(f.lin().constant() + 1)));
        break;
      }
    }
    memo_.emplace(f, out);
    return out;
  }

 private:
  std::span<const std::string> names_;
  std::unordered_map<Formula, GnnExpr> memo_;
};

LinExpr ind_of(Formula f) {
  if (f == top()) return LinExpr(1);
  if (f == bottom()) return LinExpr(0);
  return LinExpr::atom(AtomKind::Ind, f);
}

LinExpr count_of(Formula f, const BigInt& coeff) {
  if (f == bottom()) return LinExpr(0);
  return LinExpr::atom(AtomKind::Count, f, coeff);
}

Formula equals(const LinExpr& z, const BigInt& k) {
  if (z.is_constant()) return z.constant() == k ? top() : bottom();
  return conj(lin_ge(z - k), lin_ge(LinExpr(k) - z));
}

Formula at_least(const LinExpr& z, const BigInt& k) { return at_least_one(z - k + BigInt(1)); }

BigInt require_integer(const Rational& q, const char* what) {
  if (!is_integer(q)) {
    throw InputError(std::string("non-integer ") + what + " " + to_string(q) +
                     " in translation; scale the weights to integers or pass the common denominator");
  }
  return q.get_num();
}

class ScaledTranslator {
 public:
  ScaledTranslator(BigInt m, std::span<const std::string> names) : m_(std::move(m)), names_(names) {}

  LinExpr value(const GnnExpr& e, const Rational& scale) {
    switch (e->kind) {
      case GnnExprKind::Const:
        return LinExpr(require_integer(scale * e->value, "constant"));
      case GnnExprKind::Feature: {
        if (e->feature >= names_.size()) {
          throw InputError("feature index " + std::to_string(e->feature) + " has no proposition name");
        }
        return LinExpr::atom(AtomKind::Ind, prop(names_[e->feature]), require_integer(scale, "feature weight"));
      }
      case GnnExprKind::Sum:
        return value(e->a, scale) + value(e->b, scale);
      case GnnExprKind::Scale:
        return value(e->a, scale * e->value);
      case GnnExprKind::Act: {
        const auto& [k, x] = activation(e);
        return require_integer(scale / Rational(k), "weight") * x;
      }
      case GnnExprKind::Agg: {
        if (e->a->kind != GnnExprKind::Act) {
          throw InputError("aggregation of a non-activated expression cannot be translated; agg must wrap trunc(...)");
        }
        const auto& [k, z] = activation(e->a);
        (void)z;
        const LinExpr& arg = scaled_argument(e->a);
        LinExpr out;
        BigInt mult = require_integer(scale / Rational(k), "weight");
        for (BigInt j = 1; j < k; ++j) out += count_of(equals(arg, j), j);
        out += count_of(at_least(arg, k), k);
        return mult * out;
      }
    }
    return {};
  }

 private:
  BigInt scale_at(std::size_t depth) {
    BigInt k;
    mpz_pow_ui(k.get_mpz_t(), m_.get_mpz_t(), depth);
    if (k > kMaxIndicatorTerms) {
      throw LimitExceeded("truncated ReLU expansion needs " + k.get_str() + " indicator terms (cap " +
                          std::to_string(kMaxIndicatorTerms) + "); use integer weights or fewer layers");
    }
    return k;
  }

  const LinExpr& scaled_argument(const GnnExpr& act) {
    if (auto it = args_.find(act.get()); it != args_.end()) return it->second;
    BigInt k = scale_at(depth_.depth(act));
    LinExpr z = value(act->a, Rational(k));
    keep_.push_back(act);
    return args_.emplace(act.get(), std::move(z)).first->second;
  }

  // (scale K, K * trunc(value of the argument)) for an Act node.
  const std::pair<BigInt, LinExpr>& activation(const GnnExpr& act) {
    if (auto it = acts_.find(act.get()); it != acts_.end()) return it->second;
    BigInt k = scale_at(depth_.depth(act));
    const LinExpr& z = scaled_argument(act);
    LinExpr x;
    for (BigInt j = 1; j < k; ++j) x += j * ind_of(equals(z, j));
    x += k * ind_of(at_least(z, k));
    keep_.push_back(act);
    return acts_.emplace(act.get(), std::pair{k, std::move(x)}).first->second;
  }

  BigInt m_;
  std::span<const std::string> names_;
  DepthCache depth_;
  std::unordered_map<const GnnExprNode*, LinExpr> args_;
  std::unordered_map<const GnnExprNode*, std::pair<BigInt, LinExpr>> acts_;
  std::vector<GnnExpr> keep_;
};

}  // namespace

GnnExpr tr(Formula f, std::span<const std::string> names) { return TrBuilder(names).formula(f); }

Formula at_least_one(const LinExpr& xi) {
  if (xi.is_constant()) return xi.constant() >= 1 ? top() : bottom();
  if (xi.constant() == 0 && xi.terms().size() == 1) {
    const LinTerm& t = xi.terms()[0];
    if (t.kind == AtomKind::Ind && t.coeff == 1) return t.arg;
  }
  return lin_ge(xi - BigInt(1));
}

LinExpr tr_prime(const GnnExpr& e, std::span<const std::string> names) {
  if (!well_formed_for_translation(e)) {
    throw InputError("expression is not well formed: agg must wrap trunc(...)");
  }
  return ScaledTranslator(1, names).value(e, 1);
}

LinExpr tr_prime_at_scale(const GnnExpr& e, const BigInt& m, const BigInt& scale, std::span<const std::string> names) {
  if (m < 1) throw InputError("common denominator must be positive");
  if (!well_formed_for_translation(e)) {
    throw InputError("expression is not well formed: agg must wrap trunc(...)");
  }
  return ScaledTranslator(m, names).value(e, Rational(scale));
}

Formula tr_prime_scaled(const GnnExpr& e, const BigInt& m, std::span<const std::string> names) {
  if (m > kMaxCommonDenominator) {
    throw LimitExceeded("common denominator " + m.get_str() + " exceeds the cap " +
                        std::to_string(kMaxCommonDenominator) + "; rescale the weights or use integer weights");
  }
  BigInt top_scale;
  mpz_pow_ui(top_scale.get_mpz_t(), m.get_mpz_t(), act_depth(e));
  LinExpr x = tr_prime_at_scale(e, m, top_scale, names);
  return lin_ge(x - top_scale);
}

}  // namespace gnnv
