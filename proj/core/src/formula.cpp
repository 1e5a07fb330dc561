#include "gnnv/formula.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <mutex>
#include <unordered_map>

#include "gnnv/errors.hpp"

namespace gnnv {

struct FormulaNode {
  FormulaKind kind;
  std::uint32_t id;
  std::string name;
  const FormulaNode* a = nullptr;
  const FormulaNode* b = nullptr;
  LinExpr lin;
  std::size_t depth = 0;
};

class FormulaFactory {
 public:
  static FormulaFactory& instance() {
    static FormulaFactory factory;
    return factory;
  }

  Formula make(FormulaKind kind, std::string name, const FormulaNode* a, const FormulaNode* b, LinExpr lin) {
    std::string key = make_key(kind, name, a, b, lin);
    std::lock_guard lock(mutex_);
    if (auto it = table_.find(key); it != table_.end()) return Formula(it->second);
    FormulaNode& node = nodes_.emplace_back();
    node.kind = kind;
    node.id = static_cast<std::uint32_t>(nodes_.size() - 1);
    node.name = std::move(name);
    node.a = a;
    node.b = b;
    node.lin = std::move(lin);
    node.depth = compute_depth(node);
    table_.emplace(std::move(key), &node);
    return Formula(&node);
  }

  static const FormulaNode* node(Formula f) { return f.node_; }
  static Formula wrap(const FormulaNode* n) { return Formula(n); }

 private:
  static std::string make_key(FormulaKind kind, const std::string& name, const FormulaNode* a,
                              const FormulaNode* b, const LinExpr& lin) {
    std::string key(1, static_cast<char>('0' + static_cast<int>(kind)));
    switch (kind) {
      case FormulaKind::Prop:
        key += name;
        break;
      case FormulaKind::Not:
        key += std::to_string(a->id);
        break;
      case FormulaKind::And:
      case FormulaKind::Or:
        key += std::to_string(a->id) + "," + std::to_string(b->id);
        break;
      case FormulaKind::LinGe:
        key += lin.constant().get_str();
        for (const auto& t : lin.terms()) {
          key += ";" + t.coeff.get_str() + ":" + std::to_string(static_cast<int>(t.kind)) + ":" +
                 std::to_string(t.arg.id());
        }
        break;
    }
    return key;
  }

  static std::size_t compute_depth(const FormulaNode& n) {
    switch (n.kind) {
      case FormulaKind::Prop:
        return 0;
      case FormulaKind::Not:
        return n.a->depth;
      case FormulaKind::And:
      case FormulaKind::Or:
        return std::max(n.a->depth, n.b->depth);
      case FormulaKind::LinGe: {
        std::size_t d = 0;
        for (const auto& t : n.lin.terms()) {
          d = std::max(d, t.arg.modal_depth() + (t.kind == AtomKind::Ind ? 0 : 1));
        }
        return d;
      }
    }
    return 0;
  }

  std::mutex mutex_;
  std::deque<FormulaNode> nodes_;
  std::unordered_map<std::string, const FormulaNode*> table_;
};

namespace {

const FormulaNode* node_of(Formula f) { return FormulaFactory::node(f); }

}  // namespace

FormulaKind Formula::kind() const { return node_->kind; }
std::uint32_t Formula::id() const { return node_->id; }
const std::string& Formula::prop_name() const { return node_->name; }
Formula Formula::operand() const { return Formula(node_->a); }
Formula Formula::left() const { return Formula(node_->a); }
Formula Formula::right() const { return Formula(node_->b); }
const LinExpr& Formula::lin() const { return node_->lin; }
std::size_t Formula::modal_depth() const { return node_->depth; }

// ---------------------------------------------------------------------------
// LinExpr

LinExpr LinExpr::atom(AtomKind kind, Formula arg, BigInt coeff) {
  LinExpr e;
  e.add_term(coeff, kind, arg);
  return e;
}

void LinExpr::add_term(const BigInt& coeff, AtomKind kind, Formula arg) {
  if (coeff == 0) return;
  auto pos = std::lower_bound(terms_.begin(), terms_.end(), std::pair{kind, arg.id()},
                              [](const LinTerm& t, const std::pair<AtomKind, std::uint32_t>& key) {
                                return std::pair{t.kind, t.arg.id()} < key;
                              });
  if (pos != terms_.end() && pos->kind == kind && pos->arg == arg) {
    pos->coeff += coeff;
    if (pos->coeff == 0) terms_.erase(pos);
    return;
  }
  terms_.insert(pos, LinTerm{coeff, kind, arg});
}

LinExpr& LinExpr::operator+=(const LinExpr& other) {
  constant_ += other.constant_;
  for (const auto& t : other.terms_) add_term(t.coeff, t.kind, t.arg);
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& other) {
  constant_ -= other.constant_;
  for (const auto& t : other.terms_) add_term(-t.coeff, t.kind, t.arg);
  return *this;
}

LinExpr& LinExpr::operator+=(const BigInt& c) {
  constant_ += c;
  return *this;
}

LinExpr& LinExpr::operator-=(const BigInt& c) {
  constant_ -= c;
  return *this;
}

LinExpr& LinExpr::operator*=(const BigInt& c) {
  if (c == 0) {
    terms_.clear();
    constant_ = 0;
    return *this;
  }
  constant_ *= c;
  for (auto& t : terms_) t.coeff *= c;
  return *this;
}

LinExpr LinExpr::operator-() const {
  LinExpr r = *this;
  r *= BigInt(-1);
  return r;
}

// ---------------------------------------------------------------------------
// Constructors

Formula prop(const std::string& name) {
  if (name.empty()) throw InputError("empty proposition name");
  return FormulaFactory::instance().make(FormulaKind::Prop, name, nullptr, nullptr, {});
}

Formula neg(Formula f) {
  return FormulaFactory::instance().make(FormulaKind::Not, {}, node_of(f), nullptr, {});
}

Formula conj(Formula a, Formula b) {
  return FormulaFactory::instance().make(FormulaKind::And, {}, node_of(a), node_of(b), {});
}

Formula disj(Formula a, Formula b) {
  return FormulaFactory::instance().make(FormulaKind::Or, {}, node_of(a), node_of(b), {});
}

Formula conj(std::span<const Formula> fs) {
  if (fs.empty()) return top();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
  return acc;
}

Formula disj(std::span<const Formula> fs) {
  if (fs.empty()) return bottom();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
  return acc;
}

Formula lin_ge(LinExpr xi) {
  return FormulaFactory::instance().make(FormulaKind::LinGe, {}, nullptr, nullptr, std::move(xi));
}

Formula top() { return lin_ge(LinExpr(0)); }
Formula bottom() { return lin_ge(LinExpr(-1)); }
Formula implies(Formula a, Formula b) { return disj(neg(a), b); }
Formula iff(Formula a, Formula b) { return conj(implies(a, b), implies(b, a)); }

Formula diamond(Formula f) { return lin_ge(LinExpr::atom(AtomKind::Count, f) - BigInt(1)); }

Formula box(Formula f) { return lin_ge(LinExpr::atom(AtomKind::Count, nnf(neg(f)), -1)); }

Formula graded_diamond(const BigInt& k, Formula f) { return lin_ge(LinExpr::atom(AtomKind::Count, f) - k); }

Formula exactly_diamond(const BigInt& k, Formula f) {
  return conj(lin_ge(LinExpr::atom(AtomKind::Count, f) - k), lin_ge(LinExpr(k) - LinExpr::atom(AtomKind::Count, f)));
}

Formula global_box(Formula f) {
  return lin_ge(LinExpr::atom(AtomKind::GCount, f) - LinExpr::atom(AtomKind::GCount, top()));
}

Formula compare(LinExpr lhs, const std::string& op, LinExpr rhs) {
  LinExpr diff = lhs - rhs;
  if (op == ">=") return lin_ge(diff);
  if (op == "<=") return lin_ge(-diff);
  if (op == ">") return lin_ge(diff - BigInt(1));
  if (op == "<") return lin_ge(-diff - BigInt(1));
  if (op == "=") return conj(lin_ge(diff), lin_ge(-diff));
  throw InputError("unknown comparison operator '" + op + "'");
}

// ---------------------------------------------------------------------------
// NNF and structural queries

namespace {

class NnfBuilder {
 public:
  Formula run(Formula f, bool positive) {
    auto& memo = positive ? pos_ : neg_;
    if (auto it = memo.find(f.id()); it != memo.end()) return it->second;
    Formula out = positive ? pos(f) : negate(f);
    memo.emplace(f.id(), out);
    return out;
  }

 private:
  LinExpr lin(const LinExpr& xi) {
    LinExpr out(xi.constant());
    for (const auto& t : xi.terms()) out.add_term(t.coeff, t.kind, run(t.arg, true));
    return out;
  }

  Formula pos(Formula f) {
    switch (f.kind()) {
      case FormulaKind::Prop:
        return f;
      case FormulaKind::Not:
        return run(f.operand(), false);
      case FormulaKind::And:
        return conj(run(f.left(), true), run(f.right(), true));
      case FormulaKind::Or:
        return disj(run(f.left(), true), run(f.right(), true));
      case FormulaKind::LinGe:
        return lin_ge(lin(f.lin()));
    }
    return f;
  }

  Formula negate(Formula f) {
    switch (f.kind()) {
      case FormulaKind::Prop:
        return neg(f);
      case FormulaKind::Not:
        return run(f.operand(), true);
      case FormulaKind::And:
        return disj(run(f.left(), false), run(f.right(), false));
      case FormulaKind::Or:
        return conj(run(f.left(), false), run(f.right(), false));
      case FormulaKind::LinGe:
        return lin_ge(-lin(f.lin()) - BigInt(1));
    }
    return f;
  }

  std::unordered_map<std::uint32_t, Formula> pos_;
  std::unordered_map<std::uint32_t, Formula> neg_;
};

template <typename Visit>
void visit_dag(Formula root, Visit&& visit) {
  std::unordered_map<std::uint32_t, bool> seen;
  std::vector<Formula> stack{root};
  while (!stack.empty()) {
    Formula f = stack.back();
    stack.pop_back();
    if (!seen.emplace(f.id(), true).second) continue;
    visit(f);
    switch (f.kind()) {
      case FormulaKind::Prop:
        break;
      case FormulaKind::Not:
        stack.push_back(f.operand());
        break;
      case FormulaKind::And:
      case FormulaKind::Or:
        stack.push_back(f.left());
        stack.push_back(f.right());
        break;
      case FormulaKind::LinGe:
        for (const auto& t : f.lin().terms()) stack.push_back(t.arg);
        break;
    }
  }
}

}  // namespace

Formula nnf(Formula f) {
  NnfBuilder builder;
  return builder.run(f, true);
}

bool is_nnf(Formula f) {
  bool ok = true;
  visit_dag(f, [&](Formula g) {
    if (g.kind() == FormulaKind::Not && g.operand().kind() != FormulaKind::Prop) ok = false;
  });
  return ok;
}

std::size_t modal_depth(Formula f) { return f.modal_depth(); }

std::size_t formula_size(Formula f) {
  std::unordered_map<std::uint32_t, std::size_t> memo;
  constexpr auto kMax = std::numeric_limits<std::size_t>::max();
  auto add = [](std::size_t a, std::size_t b) { return a > kMax - b ? kMax : a + b; };
  std::function<std::size_t(Formula)> rec = [&](Formula g) -> std::size_t {
    if (auto it = memo.find(g.id()); it != memo.end()) return it->second;
    std::size_t s = 1;
    switch (g.kind()) {
      case FormulaKind::Prop:
        break;
      case FormulaKind::Not:
        s = add(s, rec(g.operand()));
        break;
      case FormulaKind::And:
      case FormulaKind::Or:
        s = add(s, add(rec(g.left()), rec(g.right())));
        break;
      case FormulaKind::LinGe:
        for (const auto& t : g.lin().terms()) s = add(s, rec(t.arg));
        break;
    }
    memo.emplace(g.id(), s);
    return s;
  };
  return rec(f);
}

std::set<std::string> collect_props(Formula f) {
  std::set<std::string> out;
  visit_dag(f, [&](Formula g) {
    if (g.kind() == FormulaKind::Prop) out.insert(g.prop_name());
  });
  return out;
}

bool contains_atom(Formula f, AtomKind kind) {
  bool found = false;
  visit_dag(f, [&](Formula g) {
    if (g.kind() != FormulaKind::LinGe) return;
    for (const auto& t : g.lin().terms()) {
      if (t.kind == kind) found = true;
    }
  });
  return found;
}

ModalView view_as_modal(Formula f) {
  ModalView view;
  if (f.kind() != FormulaKind::LinGe) return view;
  const LinExpr& xi = f.lin();
  if (xi.is_constant()) {
    view.shape = xi.constant() >= 0 ? ModalShape::True : ModalShape::False;
    return view;
  }
  if (xi.terms().size() != 1 || xi.terms()[0].kind != AtomKind::Count) return view;
  const LinTerm& t = xi.terms()[0];
  if (t.coeff > 0) {
    // a * #chi + c >= 0  iff  #chi >= ceil(-c / a)
    BigInt threshold = ceil_div(Rational(-xi.constant(), t.coeff));
    if (threshold <= 0) {
      view.shape = ModalShape::True;
    } else if (threshold == 1) {
      view.shape = ModalShape::Diamond;
      view.arg = t.arg;
    }
  } else {
    // -a * #chi + c >= 0  iff  #chi <= floor(c / a)
    BigInt bound = floor_div(Rational(xi.constant(), -t.coeff));
    if (bound < 0) {
      view.shape = ModalShape::False;
    } else if (bound == 0) {
      view.shape = ModalShape::Box;
      view.arg = nnf(neg(t.arg));
    }
  }
  return view;
}

namespace {

std::string fo_translate(Formula f, char x) {
  const char y = x == 'x' ? 'y' : 'x';
  switch (f.kind()) {
    case FormulaKind::Prop:
      return f.prop_name() + "(" + x + ")";
    case FormulaKind::Not:
      return "¬" + fo_translate(f.operand(), x);
    case FormulaKind::And:
      return "(" + fo_translate(f.left(), x) + " ∧ " + fo_translate(f.right(), x) + ")";
    case FormulaKind::Or:
      return "(" + fo_translate(f.left(), x) + " ∨ " + fo_translate(f.right(), x) + ")";
    case FormulaKind::LinGe: {
      ModalView view = view_as_modal(f);
      switch (view.shape) {
        case ModalShape::True:
          return "⊤";
        case ModalShape::False:
          return "⊥";
        case ModalShape::Diamond:
          return std::string("∃") + y + " (E(" + x + "," + y + ") ∧ " + fo_translate(view.arg, y) + ")";
        case ModalShape::Box:
          return std::string("∀") + y + " (E(" + x + "," + y + ") → " + fo_translate(view.arg, y) + ")";
        case ModalShape::Other:
          break;
      }
      throw InputError("standard translation: formula contains graded or linear constructs");
    }
  }
  return {};
}

}  // namespace

std::string standard_translation_fo(Formula f) { return fo_translate(f, 'x'); }

}  // namespace gnnv
