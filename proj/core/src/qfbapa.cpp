#include "gnnv/qfbapa.hpp"

#include <cctype>
#include <functional>
#include <set>
#include <unordered_map>

#include "gnnv/errors.hpp"

namespace gnnv::arith {

// ---------------------------------------------------------------------------
// Constructors

namespace {

SetExpr mk_set(SetExprNode::Kind k, std::string name, SetExpr a, SetExpr b) {
  return std::make_shared<const SetExprNode>(SetExprNode{k, std::move(name), std::move(a), std::move(b)});
}

IntExpr mk_int(IntExprNode::Kind k, std::string name, BigInt v, IntExpr a, IntExpr b, SetExpr s) {
  return std::make_shared<const IntExprNode>(
      IntExprNode{k, std::move(name), std::move(v), std::move(a), std::move(b), std::move(s)});
}

QfbapaFormula mk_f(QfbapaNode::Kind k, SetExpr s1, SetExpr s2, IntExpr e1, IntExpr e2, QfbapaFormula a,
                   QfbapaFormula b) {
  return std::make_shared<const QfbapaNode>(
      QfbapaNode{k, std::move(s1), std::move(s2), std::move(e1), std::move(e2), std::move(a), std::move(b)});
}

}  // namespace

SetExpr set_var(std::string name) { return mk_set(SetExprNode::Kind::Var, std::move(name), nullptr, nullptr); }
SetExpr set_empty() { return mk_set(SetExprNode::Kind::Empty, "", nullptr, nullptr); }
SetExpr set_universe() { return mk_set(SetExprNode::Kind::Universe, "", nullptr, nullptr); }
SetExpr set_union(SetExpr a, SetExpr b) { return mk_set(SetExprNode::Kind::Union, "", std::move(a), std::move(b)); }
SetExpr set_inter(SetExpr a, SetExpr b) {
  return mk_set(SetExprNode::Kind::Intersection, "", std::move(a), std::move(b));
}
SetExpr set_comp(SetExpr a) { return mk_set(SetExprNode::Kind::Complement, "", std::move(a), nullptr); }

IntExpr int_var(std::string name) { return mk_int(IntExprNode::Kind::Var, std::move(name), 0, nullptr, nullptr, nullptr); }
IntExpr int_const(BigInt c) { return mk_int(IntExprNode::Kind::Const, "", std::move(c), nullptr, nullptr, nullptr); }
IntExpr int_add(IntExpr a, IntExpr b) {
  return mk_int(IntExprNode::Kind::Add, "", 0, std::move(a), std::move(b), nullptr);
}
IntExpr int_mul(BigInt k, IntExpr a) { return mk_int(IntExprNode::Kind::Mul, "", std::move(k), std::move(a), nullptr, nullptr); }
IntExpr card(SetExpr s) { return mk_int(IntExprNode::Kind::Card, "", 0, nullptr, nullptr, std::move(s)); }

QfbapaFormula qf_set_eq(SetExpr a, SetExpr b) {
  return mk_f(QfbapaNode::Kind::SetEq, std::move(a), std::move(b), nullptr, nullptr, nullptr, nullptr);
}
QfbapaFormula qf_subset(SetExpr a, SetExpr b) {
  return mk_f(QfbapaNode::Kind::SetSub, std::move(a), std::move(b), nullptr, nullptr, nullptr, nullptr);
}
QfbapaFormula qf_int_eq(IntExpr a, IntExpr b) {
  return mk_f(QfbapaNode::Kind::IntEq, nullptr, nullptr, std::move(a), std::move(b), nullptr, nullptr);
}
QfbapaFormula qf_int_le(IntExpr a, IntExpr b) {
  return mk_f(QfbapaNode::Kind::IntLe, nullptr, nullptr, std::move(a), std::move(b), nullptr, nullptr);
}
QfbapaFormula qf_and(QfbapaFormula a, QfbapaFormula b) {
  return mk_f(QfbapaNode::Kind::And, nullptr, nullptr, nullptr, nullptr, std::move(a), std::move(b));
}
QfbapaFormula qf_or(QfbapaFormula a, QfbapaFormula b) {
  return mk_f(QfbapaNode::Kind::Or, nullptr, nullptr, nullptr, nullptr, std::move(a), std::move(b));
}
QfbapaFormula qf_not(QfbapaFormula a) {
  return mk_f(QfbapaNode::Kind::Not, nullptr, nullptr, nullptr, nullptr, std::move(a), nullptr);
}
QfbapaFormula qf_true() { return mk_f(QfbapaNode::Kind::True, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr); }
QfbapaFormula qf_false() { return mk_f(QfbapaNode::Kind::False, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr); }

// ---------------------------------------------------------------------------
// Printing

std::string print_set(const SetExpr& s) {
  using K = SetExprNode::Kind;
  switch (s->kind) {
    case K::Var: return s->name;
    case K::Empty: return "empty";
    case K::Universe: return "U";
    case K::Union: return "(" + print_set(s->a) + " cup " + print_set(s->b) + ")";
    case K::Intersection: return "(" + print_set(s->a) + " cap " + print_set(s->b) + ")";
    case K::Complement: return "comp " + print_set(s->a);
  }
  return {};
}

std::string print_int(const IntExpr& e) {
  using K = IntExprNode::Kind;
  switch (e->kind) {
    case K::Var: return e->name;
    case K::Const: return e->value < 0 ? "(0 - " + BigInt(-e->value).get_str() + ")" : e->value.get_str();
    case K::Add: return "(" + print_int(e->a) + " + " + print_int(e->b) + ")";
    case K::Mul: return (e->value < 0 ? "(0 - " + BigInt(-e->value).get_str() + ")" : e->value.get_str()) + "*" +
                        print_int(e->a);
    case K::Card: return "|" + print_set(e->set) + "|";
  }
  return {};
}

std::string print_qfbapa(const QfbapaFormula& f) {
  using K = QfbapaNode::Kind;
  switch (f->kind) {
    case K::SetEq: return print_set(f->s1) + " = " + print_set(f->s2);
    case K::SetSub: return print_set(f->s1) + " sub " + print_set(f->s2);
    case K::IntEq: return print_int(f->e1) + " = " + print_int(f->e2);
    case K::IntLe: return print_int(f->e1) + " <= " + print_int(f->e2);
    case K::And: return "(" + print_qfbapa(f->a) + " and " + print_qfbapa(f->b) + ")";
    case K::Or: return "(" + print_qfbapa(f->a) + " or " + print_qfbapa(f->b) + ")";
    case K::Not: return "not (" + print_qfbapa(f->a) + ")";
    case K::True: return "true";
    case K::False: return "false";
  }
  return {};
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct QTok {
  enum Kind { End, Ident, Int, Bar, LParen, RParen, Plus, Minus, Star, Eq, Le, Ge, Lt, Gt } kind;
  std::string text;
  std::size_t pos;
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> k{"cup", "cap", "comp", "U", "empty", "sub", "and", "or", "not", "true", "false"};
  return k;
}

std::vector<QTok> lex_qfbapa(std::string_view s) {
  std::vector<QTok> out;
  std::size_t i = 0;
  auto fail = [&](const std::string& m) -> void {
    throw InputError("qfbapa: position " + std::to_string(i) + ": " + m);
  };
  while (true) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i >= s.size()) {
      out.push_back({QTok::End, "", i});
      return out;
    }
    const std::size_t start = i;
    const char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      out.push_back({QTok::Int, std::string(s.substr(start, i - start)), start});
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({QTok::Ident, std::string(s.substr(start, i - start)), start});
    } else if (s.substr(i, 2) == "<=") {
      out.push_back({QTok::Le, "<=", start});
      i += 2;
    } else if (s.substr(i, 2) == ">=") {
      out.push_back({QTok::Ge, ">=", start});
      i += 2;
    } else {
      QTok::Kind k;
      switch (c) {
        case '|': k = QTok::Bar; break;
        case '(': k = QTok::LParen; break;
        case ')': k = QTok::RParen; break;
        case '+': k = QTok::Plus; break;
        case '-': k = QTok::Minus; break;
        case '*': k = QTok::Star; break;
        case '=': k = QTok::Eq; break;
        case '<': k = QTok::Lt; break;
        case '>': k = QTok::Gt; break;
        default: fail(std::string("unexpected character '") + c + "'"); return out;
      }
      out.push_back({k, std::string(1, c), start});
      ++i;
    }
  }
}

class QParser {
 public:
  explicit QParser(std::vector<QTok> toks) : t_(std::move(toks)) {}

  QfbapaFormula parse_all() {
    QfbapaFormula f = disjunction();
    if (peek().kind != QTok::End) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const QTok& peek() const { return t_[p_]; }
  bool is_word(const char* w) const { return peek().kind == QTok::Ident && peek().text == w; }
  bool accept_word(const char* w) {
    if (!is_word(w)) return false;
    ++p_;
    return true;
  }
  bool accept(QTok::Kind k) {
    if (peek().kind != k) return false;
    ++p_;
    return true;
  }
  void expect(QTok::Kind k, const char* what) {
    if (!accept(k)) fail(std::string("expected ") + what);
  }
  [[noreturn]] void fail(const std::string& m) const {
    throw InputError("qfbapa: position " + std::to_string(peek().pos) + ": " + m);
  }

  QfbapaFormula disjunction() {
    QfbapaFormula f = conjunction();
    while (accept_word("or")) f = qf_or(f, conjunction());
    return f;
  }
  QfbapaFormula conjunction() {
    QfbapaFormula f = unary();
    while (accept_word("and")) f = qf_and(f, unary());
    return f;
  }
  QfbapaFormula unary() {
    if (accept_word("not")) return qf_not(unary());
    if (accept_word("true")) return qf_true();
    if (accept_word("false")) return qf_false();
    if (peek().kind != QTok::LParen) return atom();
    const std::size_t save = p_;
    try {
      return atom();
    } catch (const InputError&) {
      p_ = save;
    }
    expect(QTok::LParen, "'('");
    QfbapaFormula f = disjunction();
    expect(QTok::RParen, "')'");
    return f;
  }

  static bool capitalised(const std::string& w) { return std::isupper(static_cast<unsigned char>(w[0])) != 0; }

  QfbapaFormula atom() {
    const QTok& t = peek();
    bool set_side = false;
    if (t.kind == QTok::Ident) {
      set_side = t.text == "U" || t.text == "empty" || t.text == "comp" ||
                 (capitalised(t.text) && !keywords().count(t.text));
    }
    if (t.kind == QTok::LParen) {
      const std::size_t save = p_;
      try {
        return set_atom();
      } catch (const InputError&) {
        p_ = save;
      }
      return int_atom();
    }
    return set_side ? set_atom() : int_atom();
  }

  QfbapaFormula set_atom() {
    SetExpr a = set_union_expr();
    if (accept(QTok::Eq)) return qf_set_eq(a, set_union_expr());
    if (accept_word("sub")) return qf_subset(a, set_union_expr());
    fail("expected '=' or 'sub' after a set expression");
  }

  QfbapaFormula int_atom() {
    IntExpr a = int_sum();
    QTok::Kind op = peek().kind;
    if (op != QTok::Eq && op != QTok::Le && op != QTok::Ge && op != QTok::Lt && op != QTok::Gt) {
      fail("expected a comparison");
    }
    ++p_;
    IntExpr b = int_sum();
    switch (op) {
      case QTok::Eq: return qf_int_eq(a, b);
      case QTok::Le: return qf_int_le(a, b);
      case QTok::Ge: return qf_int_le(b, a);
      case QTok::Lt: return qf_int_le(int_add(a, int_const(1)), b);
      default: return qf_int_le(int_add(b, int_const(1)), a);
    }
  }

  SetExpr set_union_expr() {
    SetExpr s = set_inter_expr();
    while (accept_word("cup")) s = set_union(s, set_inter_expr());
    return s;
  }
  SetExpr set_inter_expr() {
    SetExpr s = set_unary();
    while (accept_word("cap")) s = set_inter(s, set_unary());
    return s;
  }
  SetExpr set_unary() {
    if (accept_word("comp")) return set_comp(set_unary());
    if (accept_word("U")) return set_universe();
    if (accept_word("empty")) return set_empty();
    if (accept(QTok::LParen)) {
      SetExpr s = set_union_expr();
      expect(QTok::RParen, "')'");
      return s;
    }
    if (peek().kind == QTok::Ident && !keywords().count(peek().text)) return set_var(t_[p_++].text);
    fail("expected a set expression");
  }

  IntExpr int_sum() {
    IntExpr e = accept(QTok::Minus) ? int_mul(-1, int_term()) : int_term();
    while (true) {
      if (accept(QTok::Plus)) e = int_add(e, int_term());
      else if (accept(QTok::Minus)) e = int_add(e, int_mul(-1, int_term()));
      else return e;
    }
  }
  IntExpr int_term() {
    IntExpr e = int_factor();
    while (accept(QTok::Star)) {
      IntExpr r = int_factor();
      if (e->kind == IntExprNode::Kind::Const) e = int_mul(e->value, r);
      else if (r->kind == IntExprNode::Kind::Const) e = int_mul(r->value, e);
      else fail("non-linear product");
    }
    return e;
  }
  IntExpr int_factor() {
    const QTok& t = peek();
    if (t.kind == QTok::Int) return int_const(BigInt(t_[p_++].text));
    if (accept(QTok::Minus)) return int_mul(-1, int_factor());
    if (accept(QTok::Bar)) {
      SetExpr s = set_union_expr();
      expect(QTok::Bar, "'|'");
      return card(s);
    }
    if (accept(QTok::LParen)) {
      IntExpr e = int_sum();
      expect(QTok::RParen, "')'");
      return e;
    }
    if (t.kind == QTok::Ident && !keywords().count(t.text)) {
      if (capitalised(t.text)) fail("set variable '" + t.text + "' used as an integer; write |" + t.text + "|");
      return int_var(t_[p_++].text);
    }
    fail("expected an integer expression");
  }

  std::vector<QTok> t_;
  std::size_t p_ = 0;
};

}  // namespace

QfbapaFormula parse_qfbapa(std::string_view text) { return QParser(lex_qfbapa(text)).parse_all(); }

// ---------------------------------------------------------------------------
// Structure

QfbapaFormula eliminate_set_atoms(const QfbapaFormula& f) {
  using K = QfbapaNode::Kind;
  auto empty_card = [](SetExpr a, SetExpr b) { return qf_int_eq(card(set_inter(a, set_comp(b))), int_const(0)); };
  switch (f->kind) {
    case K::SetEq: return qf_and(empty_card(f->s1, f->s2), empty_card(f->s2, f->s1));
    case K::SetSub: return empty_card(f->s1, f->s2);
    case K::And: return qf_and(eliminate_set_atoms(f->a), eliminate_set_atoms(f->b));
    case K::Or: return qf_or(eliminate_set_atoms(f->a), eliminate_set_atoms(f->b));
    case K::Not: return qf_not(eliminate_set_atoms(f->a));
    default: return f;
  }
}

namespace {

void visit_sets(const SetExpr& s, const std::function<void(const SetExpr&)>& fn) {
  fn(s);
  if (s->a) visit_sets(s->a, fn);
  if (s->b) visit_sets(s->b, fn);
}

void visit_ints(const IntExpr& e, const std::function<void(const IntExpr&)>& fn) {
  fn(e);
  if (e->a) visit_ints(e->a, fn);
  if (e->b) visit_ints(e->b, fn);
}

void visit_formula(const QfbapaFormula& f, const std::function<void(const SetExpr&)>& on_set,
                   const std::function<void(const IntExpr&)>& on_int) {
  if (f->s1) on_set(f->s1);
  if (f->s2) on_set(f->s2);
  if (f->e1) on_int(f->e1);
  if (f->e2) on_int(f->e2);
  if (f->a) visit_formula(f->a, on_set, on_int);
  if (f->b) visit_formula(f->b, on_set, on_int);
}

void push_unique(std::vector<std::string>& out, const std::string& s) {
  if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
}

}  // namespace

std::vector<std::string> set_variables(const QfbapaFormula& f) {
  std::vector<std::string> out;
  auto on_set = [&](const SetExpr& s) {
    visit_sets(s, [&](const SetExpr& x) {
      if (x->kind == SetExprNode::Kind::Var) push_unique(out, x->name);
    });
  };
  auto on_int = [&](const IntExpr& e) {
    visit_ints(e, [&](const IntExpr& x) {
      if (x->kind == IntExprNode::Kind::Card) on_set(x->set);
    });
  };
  visit_formula(f, on_set, on_int);
  return out;
}

std::vector<std::string> int_variables(const QfbapaFormula& f) {
  std::vector<std::string> out;
  visit_formula(f, [](const SetExpr&) {}, [&](const IntExpr& e) {
    visit_ints(e, [&](const IntExpr& x) {
      if (x->kind == IntExprNode::Kind::Var) push_unique(out, x->name);
    });
  });
  return out;
}

std::vector<SetExpr> cardinality_terms(const QfbapaFormula& f) {
  std::vector<SetExpr> out;
  std::set<std::string> seen;
  visit_formula(f, [](const SetExpr&) {}, [&](const IntExpr& e) {
    visit_ints(e, [&](const IntExpr& x) {
      if (x->kind == IntExprNode::Kind::Card && seen.insert(print_set(x->set)).second) out.push_back(x->set);
    });
  });
  return out;
}

bool region_models(const RegionCode& rho, const SetExpr& b, const std::vector<std::string>& vars) {
  using K = SetExprNode::Kind;
  switch (b->kind) {
    case K::Var: {
      auto it = std::find(vars.begin(), vars.end(), b->name);
      if (it == vars.end()) throw InputError("region code has no bit for set variable '" + b->name + "'");
      const auto i = static_cast<std::size_t>(it - vars.begin());
      if (i >= rho.size()) throw InputError("region code too short");
      return rho[i];
    }
    case K::Empty: return false;
    case K::Universe: return true;
    case K::Union: return region_models(rho, b->a, vars) || region_models(rho, b->b, vars);
    case K::Intersection: return region_models(rho, b->a, vars) && region_models(rho, b->b, vars);
    case K::Complement: return !region_models(rho, b->a, vars);
  }
  return false;
}

BigInt QfbapaModel::domain_size() const {
  BigInt n = 0;
  for (const auto& [rho, size] : regions) n += size;
  return n;
}

namespace {

class ModelEvaluator {
 public:
  explicit ModelEvaluator(const QfbapaModel& m) : m_(m) {}

  bool holds(const QfbapaFormula& f) {
    using K = QfbapaNode::Kind;
    switch (f->kind) {
      case K::SetEq:
      case K::SetSub:
        for (const auto& [rho, size] : m_.regions) {
          if (size == 0) continue;
          bool in1 = region_models(rho, f->s1, m_.set_vars);
          bool in2 = region_models(rho, f->s2, m_.set_vars);
          if (f->kind == K::SetEq ? in1 != in2 : in1 && !in2) return false;
        }
        return true;
      case K::IntEq: return value(f->e1) == value(f->e2);
      case K::IntLe: return value(f->e1) <= value(f->e2);
      case K::And: return holds(f->a) && holds(f->b);
      case K::Or: return holds(f->a) || holds(f->b);
      case K::Not: return !holds(f->a);
      case K::True: return true;
      case K::False: return false;
    }
    return false;
  }

  BigInt value(const IntExpr& e) {
    using K = IntExprNode::Kind;
    switch (e->kind) {
      case K::Var: {
        auto it = m_.ints.find(e->name);
        if (it == m_.ints.end()) throw InputError("model does not assign integer variable '" + e->name + "'");
        return it->second;
      }
      case K::Const: return e->value;
      case K::Add: return value(e->a) + value(e->b);
      case K::Mul: return e->value * value(e->a);
      case K::Card: {
        BigInt n = 0;
        for (const auto& [rho, size] : m_.regions) {
          if (region_models(rho, e->set, m_.set_vars)) n += size;
        }
        return n;
      }
    }
    return 0;
  }

 private:
  const QfbapaModel& m_;
};

}  // namespace

bool check_model(const QfbapaFormula& f, const QfbapaModel& m) {
  for (const auto& [rho, size] : m.regions) {
    if (size < 0) return false;
    if (rho.size() != m.set_vars.size()) throw InputError("region code length differs from the set variable count");
  }
  return ModelEvaluator(m).holds(f);
}

// ---------------------------------------------------------------------------
// Reductions to integer arithmetic

namespace {

using CardMap = std::function<LinearConstraint(const SetExpr&)>;

class Linearizer {
 public:
  Linearizer(const std::vector<std::string>& int_vars, CardMap cards) : ints_(int_vars), cards_(std::move(cards)) {}

  LinearConstraint lin(const IntExpr& e) {
    using K = IntExprNode::Kind;
    LinearConstraint out;
    switch (e->kind) {
      case K::Var: {
        auto it = std::find(ints_.begin(), ints_.end(), e->name);
        out.add(static_cast<std::size_t>(it - ints_.begin()), 1);
        break;
      }
      case K::Const: out.constant = e->value; break;
      case K::Add: {
        out = lin(e->a);
        LinearConstraint b = lin(e->b);
        for (const auto& [j, a] : b.terms) out.add(j, a);
        out.constant += b.constant;
        break;
      }
      case K::Mul: {
        out = lin(e->a);
        for (auto& [j, a] : out.terms) a *= e->value;
        out.constant *= e->value;
        if (e->value == 0) out.terms.clear();
        break;
      }
      case K::Card: out = cards_(e->set); break;
    }
    return out;
  }

  // rhs - lhs (+ shift)
  LinearConstraint diff(const IntExpr& lhs, const IntExpr& rhs, long shift) {
    LinearConstraint out = lin(rhs);
    LinearConstraint l = lin(lhs);
    for (const auto& [j, a] : l.terms) out.add(j, -a);
    out.constant -= l.constant;
    out.constant += shift;
    return out;
  }

  QfpaFormula formula(const QfbapaFormula& f, bool positive) {
    using K = QfbapaNode::Kind;
    switch (f->kind) {
      case K::IntLe:
        return positive ? QfpaFormula::of(diff(f->e1, f->e2, 0)) : QfpaFormula::of(diff(f->e2, f->e1, -1));
      case K::IntEq:
        if (positive) return QfpaFormula::equal(diff(f->e1, f->e2, 0));
        return QfpaFormula::any({QfpaFormula::of(diff(f->e1, f->e2, -1)), QfpaFormula::of(diff(f->e2, f->e1, -1))});
      case K::And:
      case K::Or: {
        std::vector<QfpaFormula> kids{formula(f->a, positive), formula(f->b, positive)};
        return (f->kind == K::And) == positive ? QfpaFormula::all(std::move(kids)) : QfpaFormula::any(std::move(kids));
      }
      case K::Not: return formula(f->a, !positive);
      case K::True: return positive ? QfpaFormula::truth() : QfpaFormula::falsity();
      case K::False: return positive ? QfpaFormula::falsity() : QfpaFormula::truth();
      case K::SetEq:
      case K::SetSub: throw std::logic_error("set atoms must be eliminated first");
    }
    return QfpaFormula::truth();
  }

 private:
  const std::vector<std::string>& ints_;
  CardMap cards_;
};

// Set expressions B with a top-level conjunct |B| = 0.
std::vector<SetExpr> forced_empty(const QfbapaFormula& f) {
  std::vector<SetExpr> out;
  std::function<void(const QfbapaFormula&)> rec = [&](const QfbapaFormula& g) {
    if (g->kind == QfbapaNode::Kind::And) {
      rec(g->a);
      rec(g->b);
      return;
    }
    if (g->kind != QfbapaNode::Kind::IntEq) return;
    auto zero = [](const IntExpr& e) { return e->kind == IntExprNode::Kind::Const && e->value == 0; };
    if (g->e1->kind == IntExprNode::Kind::Card && zero(g->e2)) out.push_back(g->e1->set);
    if (g->e2->kind == IntExprNode::Kind::Card && zero(g->e1)) out.push_back(g->e2->set);
  };
  rec(f);
  return out;
}

RegionCode code_of(std::size_t index, std::size_t e) {
  RegionCode rho(e);
  for (std::size_t i = 0; i < e; ++i) rho[i] = (index >> i) & 1U;
  return rho;
}

std::size_t term_index(const std::vector<SetExpr>& terms, const SetExpr& s) {
  const std::string key = print_set(s);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (print_set(terms[i]) == key) return i;
  }
  throw std::logic_error("cardinality term not collected");
}

}  // namespace

NaiveReduction naive_reduction(const QfbapaFormula& f) {
  NaiveReduction r;
  QfbapaFormula g = eliminate_set_atoms(f);
  r.set_vars = set_variables(g);
  r.terms = cardinality_terms(g);
  const std::size_t e = r.set_vars.size();
  if (e > kNaiveRegionGuard) {
    throw LimitExceeded("naive reduction limited to " + std::to_string(kNaiveRegionGuard) + " set variables, got " +
                        std::to_string(e));
  }
  const auto ints = int_variables(g);
  for (const auto& v : ints) r.problem.add_var(v, false);
  r.first_k = r.problem.var_count();
  for (std::size_t i = 0; i < r.terms.size(); ++i) r.problem.add_var("k" + std::to_string(i + 1), false);
  r.first_region = r.problem.var_count();
  const std::size_t regions = std::size_t{1} << e;
  for (std::size_t idx = 0; idx < regions; ++idx) {
    std::string name = "s_";
    for (std::size_t i = 0; i < e; ++i) name += ((idx >> i) & 1U) ? '1' : '0';
    r.problem.add_var(name, true);
  }
  std::vector<QfpaFormula> parts;
  for (std::size_t i = 0; i < r.terms.size(); ++i) {
    LinearConstraint def;
    def.add(r.first_k + i, -1);
    for (std::size_t idx = 0; idx < regions; ++idx) {
      if (region_models(code_of(idx, e), r.terms[i], r.set_vars)) def.add(r.first_region + idx, 1);
    }
    parts.push_back(QfpaFormula::equal(def));
  }
  const std::size_t first_k = r.first_k;
  const auto& terms = r.terms;
  Linearizer lin(ints, [&](const SetExpr& s) {
    LinearConstraint c;
    c.add(first_k + term_index(terms, s), 1);
    return c;
  });
  parts.push_back(lin.formula(g, true));
  r.problem.formula = QfpaFormula::all(std::move(parts));
  return r;
}

QfbapaResult qfbapa_sat_naive(const QfbapaFormula& f, const QfpaOptions& opts) {
  NaiveReduction nr = naive_reduction(f);
  QfbapaResult res;
  res.d = nr.terms.size();
  res.e = nr.set_vars.size();
  res.n_max = caratheodory_bound(res.d);
  QfpaResult q = qfpa_sat(nr.problem, opts);
  res.verdict = q.verdict;
  res.nodes = q.nodes;
  res.reason = q.reason;
  if (q.verdict != Verdict::Sat) return res;
  res.model.set_vars = nr.set_vars;
  const auto ints = int_variables(eliminate_set_atoms(f));
  for (std::size_t i = 0; i < ints.size(); ++i) res.model.ints[ints[i]] = q.assignment[i];
  for (std::size_t idx = 0; idx < (std::size_t{1} << res.e); ++idx) {
    const BigInt& s = q.assignment[nr.first_region + idx];
    if (s > 0) res.model.regions[code_of(idx, res.e)] = s;
  }
  res.support = res.model.regions.size();
  if (!check_model(f, res.model)) throw std::logic_error("qfbapa: naive model failed the check");
  return res;
}

inline constexpr std::size_t kRegionEnumerationGuard = 20;

QfbapaResult qfbapa_sat(const QfbapaFormula& f, const QfpaOptions& opts) {
  QfbapaResult res;
  QfbapaFormula g = eliminate_set_atoms(f);
  const auto set_vars = set_variables(g);
  const auto ints = int_variables(g);
  const auto terms = cardinality_terms(g);
  res.d = terms.size();
  res.e = set_vars.size();
  res.n_max = caratheodory_bound(res.d);
  if (res.e > kRegionEnumerationGuard) {
    throw LimitExceeded("at most " + std::to_string(kRegionEnumerationGuard) + " set variables are supported");
  }

  // Regions only matter through the set expressions they belong to, so
  // variables are attached to signatures (rho |= B_i)_i; pruned regions are
  // those inside a set forced empty at the top level.
  const auto empties = forced_empty(g);
  std::map<std::vector<long>, RegionCode> representative;
  std::vector<std::vector<long>> signatures;
  for (std::size_t idx = 0; idx < (std::size_t{1} << res.e); ++idx) {
    RegionCode rho = code_of(idx, res.e);
    bool pruned = false;
    for (const auto& b : empties) pruned = pruned || region_models(rho, b, set_vars);
    if (pruned) continue;
    std::vector<long> sig(res.d);
    bool nonzero = false;
    for (std::size_t i = 0; i < res.d; ++i) {
      sig[i] = region_models(rho, terms[i], set_vars) ? 1 : 0;
      nonzero = nonzero || sig[i] != 0;
    }
    if (!nonzero) continue;
    if (representative.emplace(sig, rho).second) signatures.push_back(sig);
  }

  QfpaProblem p;
  for (const auto& v : ints) p.add_var(v, false);
  const std::size_t first = p.var_count();
  for (std::size_t s = 0; s < signatures.size(); ++s) p.add_var("s" + std::to_string(s), true);
  Linearizer lin(ints, [&](const SetExpr& b) {
    const std::size_t i = term_index(terms, b);
    LinearConstraint c;
    for (std::size_t s = 0; s < signatures.size(); ++s) {
      if (signatures[s][i]) c.add(first + s, 1);
    }
    return c;
  });
  p.formula = lin.formula(g, true);

  QfpaResult q = qfpa_sat(p, opts);
  res.verdict = q.verdict;
  res.nodes = q.nodes;
  res.reason = q.reason;
  if (q.verdict != Verdict::Sat) return res;

  std::vector<BigInt> mult(q.assignment.begin() + static_cast<long>(first), q.assignment.end());
  mult = reduce_support(signatures, std::move(mult));
  res.model.set_vars = set_vars;
  for (std::size_t i = 0; i < ints.size(); ++i) res.model.ints[ints[i]] = q.assignment[i];
  for (std::size_t s = 0; s < signatures.size(); ++s) {
    if (mult[s] > 0) res.model.regions[representative.at(signatures[s])] = mult[s];
  }
  res.support = res.model.regions.size();
  if (!check_model(f, res.model)) throw std::logic_error("qfbapa: reconstructed model failed the check");
  return res;
}

}  // namespace gnnv::arith
