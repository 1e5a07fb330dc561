#include "gnnv/formula_io.hpp"

#include <cctype>
#include <optional>

#include "gnnv/errors.hpp"

namespace gnnv {

namespace {

enum class Tok {
  End, Ident, Int, LParen, RParen, Not, And, Or, Implies, Diamond, Box, Graded, GBox,
  Hash, GHash, Ind, Plus, Minus, Star, Ge, Le, Gt, Lt, Eq, True, False
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      std::size_t start = i_;
      if (i_ >= s_.size()) {
        out.push_back({Tok::End, "", start});
        return out;
      }
      char c = s_[i_];
      auto push = [&](Tok k, std::size_t len) {
        out.push_back({k, std::string(s_.substr(start, len)), start});
        i_ += len;
      };
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i_;
        while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
        if (j < s_.size() && (s_[j] == '.' || s_[j] == '/')) fail(j, "non-integer constant");
        push(Tok::Int, j - i_);
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i_;
        while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) ++j;
        std::string word(s_.substr(i_, j - i_));
        Tok k = Tok::Ident;
        if (word == "true") k = Tok::True;
        if (word == "false") k = Tok::False;
        if (word == "ind") k = Tok::Ind;
        push(k, j - i_);
      } else if (starts("->")) {
        push(Tok::Implies, 2);
      } else if (starts("<>")) {
        push(Tok::Diamond, 2);
      } else if (starts("<=")) {
        push(Tok::Le, 2);
      } else if (starts(">=")) {
        push(Tok::Ge, 2);
      } else if (starts("[]")) {
        push(Tok::Box, 2);
      } else if (starts("[g]")) {
        push(Tok::GBox, 3);
      } else if (starts("#g(")) {
        push(Tok::GHash, 2);
      } else if (c == '<' && graded_len() > 0) {
        std::size_t len = graded_len();
        out.push_back({Tok::Graded, std::string(s_.substr(i_ + 1, len - 2)), start});
        i_ += len;
      } else {
        switch (c) {
          case '(': push(Tok::LParen, 1); break;
          case ')': push(Tok::RParen, 1); break;
          case '~': push(Tok::Not, 1); break;
          case '&': push(Tok::And, 1); break;
          case '|': push(Tok::Or, 1); break;
          case '#': push(Tok::Hash, 1); break;
          case '+': push(Tok::Plus, 1); break;
          case '-': push(Tok::Minus, 1); break;
          case '*': push(Tok::Star, 1); break;
          case '>': push(Tok::Gt, 1); break;
          case '<': push(Tok::Lt, 1); break;
          case '=': push(Tok::Eq, 1); break;
          default: fail(i_, std::string("unexpected character '") + c + "'");
        }
      }
    }
  }

  [[noreturn]] static void fail(std::size_t pos, const std::string& msg) {
    throw InputError("formula: position " + std::to_string(pos) + ": " + msg);
  }

 private:
  void skip_space() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool starts(std::string_view p) const { return s_.substr(i_, p.size()) == p; }
  // Length of "<digits>" at the cursor, or 0.
  std::size_t graded_len() const {
    std::size_t j = i_ + 1;
    while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
    if (j == i_ + 1 || j >= s_.size() || s_[j] != '>') return 0;
    return j + 1 - i_;
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Formula parse_all() {
    Formula f = formula();
    if (peek().kind != Tok::End) error("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  void expect(Tok k, const char* what) {
    if (!accept(k)) error(std::string("expected ") + what);
  }
  [[noreturn]] void error(const std::string& msg) const {
    const Token& t = peek();
    Lexer::fail(t.pos, t.kind == Tok::End ? msg + " at end of input" : msg);
  }

  Formula formula() {
    Formula lhs = disjunction();
    if (accept(Tok::Implies)) return implies(lhs, formula());
    return lhs;
  }

  Formula disjunction() {
    Formula acc = conjunction();
    while (accept(Tok::Or)) acc = disj(acc, conjunction());
    return acc;
  }

  Formula conjunction() {
    Formula acc = unary();
    while (accept(Tok::And)) acc = conj(acc, unary());
    return acc;
  }

  Formula unary() {
    switch (peek().kind) {
      case Tok::Not: next(); return neg(unary());
      case Tok::Diamond: next(); return diamond(unary());
      case Tok::Box: next(); return box(unary());
      case Tok::GBox: next(); return global_box(unary());
      case Tok::Graded: {
        Token t = next();
        BigInt k(t.text);
        if (k < 1) Lexer::fail(t.pos, "graded modality needs k >= 1");
        return graded_diamond(k, unary());
      }
      default: return primary();
    }
  }

  Formula primary() {
    switch (peek().kind) {
      case Tok::True: next(); return top();
      case Tok::False: next(); return bottom();
      case Tok::Ident: return prop(next().text);
      case Tok::LParen: {
        next();
        Formula f = formula();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Int:
      case Tok::Minus:
      case Tok::Hash:
      case Tok::GHash:
      case Tok::Ind: return linear_atom();
      default: error("expected a formula");
    }
  }

  Formula linear_atom() {
    LinExpr lhs = sum();
    Tok k = peek().kind;
    std::string op;
    switch (k) {
      case Tok::Ge: op = ">="; break;
      case Tok::Le: op = "<="; break;
      case Tok::Gt: op = ">"; break;
      case Tok::Lt: op = "<"; break;
      case Tok::Eq: op = "="; break;
      default: error("expected a comparison operator");
    }
    next();
    LinExpr rhs = sum();
    return compare(std::move(lhs), op, std::move(rhs));
  }

  LinExpr sum() {
    LinExpr acc;
    bool negative = accept(Tok::Minus);
    while (true) {
      LinExpr t = term();
      if (negative) acc -= t; else acc += t;
      if (accept(Tok::Plus)) negative = false;
      else if (accept(Tok::Minus)) negative = true;
      else return acc;
    }
  }

  LinExpr term() {
    if (peek().kind == Tok::Int) {
      BigInt c(next().text);
      if (!accept(Tok::Star)) return LinExpr(c);
      return c * count_atom();
    }
    return count_atom();
  }

  LinExpr count_atom() {
    AtomKind kind;
    switch (peek().kind) {
      case Tok::Hash: kind = AtomKind::Count; break;
      case Tok::GHash: kind = AtomKind::GCount; break;
      case Tok::Ind: kind = AtomKind::Ind; break;
      default: error("expected '#(', '#g(' or 'ind('");
    }
    next();
    expect(Tok::LParen, "'('");
    Formula arg = formula();
    expect(Tok::RParen, "')'");
    return LinExpr::atom(kind, arg);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

enum Level { kOr = 1, kAnd = 2, kUnary = 3 };

std::string print_at(Formula f, int level);

std::string atom_text(const LinTerm& t) {
  std::string inner = print_at(t.arg, 0);
  switch (t.kind) {
    case AtomKind::Ind: return "ind(" + inner + ")";
    case AtomKind::Count: return "#(" + inner + ")";
    case AtomKind::GCount: return "#g(" + inner + ")";
  }
  return {};
}

std::string terms_text(const std::vector<LinTerm>& terms, bool flip) {
  std::string out;
  bool first = true;
  for (const auto& t : terms) {
    BigInt c = flip ? BigInt(-t.coeff) : t.coeff;
    BigInt mag = abs(c);
    std::string body = mag == 1 ? atom_text(t) : mag.get_str() + "*" + atom_text(t);
    if (first) out += c < 0 ? "-" + body : body;
    else out += (c < 0 ? " - " : " + ") + body;
    first = false;
  }
  return out;
}

std::string lin_atom_text(const LinExpr& xi) {
  if (xi.is_constant()) {
    if (xi.constant() == 0) return "true";
    if (xi.constant() == -1) return "false";
    return xi.constant().get_str() + " >= 0";
  }
  bool all_negative = true;
  for (const auto& t : xi.terms()) all_negative = all_negative && t.coeff < 0;
  if (all_negative) return terms_text(xi.terms(), true) + " <= " + xi.constant().get_str();
  return terms_text(xi.terms(), false) + " >= " + BigInt(-xi.constant()).get_str();
}

std::string print_at(Formula f, int level) {
  auto wrap = [&](int own, std::string s) { return own < level ? "(" + s + ")" : s; };
  switch (f.kind()) {
    case FormulaKind::Prop: return f.prop_name();
    case FormulaKind::Not: return "~" + print_at(f.operand(), kUnary);
    case FormulaKind::And: return wrap(kAnd, print_at(f.left(), kAnd) + " & " + print_at(f.right(), kUnary));
    case FormulaKind::Or: return wrap(kOr, print_at(f.left(), kOr) + " | " + print_at(f.right(), kAnd));
    case FormulaKind::LinGe: {
      std::string s = lin_atom_text(f.lin());
      bool bare = f.lin().is_constant() && (f.lin().constant() == 0 || f.lin().constant() == -1);
      return bare || level < kUnary ? s : "(" + s + ")";
    }
  }
  return {};
}

}  // namespace

Formula parse_formula(std::string_view text) {
  return Parser(Lexer(text).run()).parse_all();
}

std::string print_formula(Formula f) { return print_at(f, 0); }

std::string print_lin(const LinExpr& xi) {
  if (xi.is_constant()) return xi.constant().get_str();
  std::string out = terms_text(xi.terms(), false);
  if (xi.constant() > 0) out += " + " + xi.constant().get_str();
  if (xi.constant() < 0) out += " - " + BigInt(-xi.constant()).get_str();
  return out;
}

}  // namespace gnnv
