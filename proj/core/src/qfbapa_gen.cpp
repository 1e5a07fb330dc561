#include <string>
#include <vector>

#include "gnnv/qfbapa.hpp"

namespace gnnv::arith {

namespace {

class QGen {
 public:
  QGen(const RandomQfbapaConfig& cfg, std::mt19937_64& rng) : cfg_(cfg), rng_(rng) {
    for (std::size_t i = 0; i < cfg.set_vars; ++i) sets_.push_back("S" + std::to_string(i + 1));
    const char* names[] = {"x", "y", "z", "w"};
    for (std::size_t i = 0; i < cfg.int_vars && i < 4; ++i) ints_.push_back(names[i]);
    for (std::size_t i = 0; i < cfg.set_terms; ++i) pool_.push_back(set_expr(2));
  }

  QfbapaFormula gen(std::size_t depth) {
    if (depth == 0 || coin(0.3)) return atom();
    switch (pick(3)) {
      case 0: return qf_and(gen(depth - 1), gen(depth - 1));
      case 1: return qf_or(gen(depth - 1), gen(depth - 1));
      default: return qf_not(gen(depth - 1));
    }
  }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }

  SetExpr set_expr(std::size_t depth) {
    if (sets_.empty()) return coin(0.5) ? set_universe() : set_empty();
    if (depth == 0 || coin(0.35)) return set_var(sets_[pick(sets_.size())]);
    switch (pick(3)) {
      case 0: return set_union(set_expr(depth - 1), set_expr(depth - 1));
      case 1: return set_inter(set_expr(depth - 1), set_expr(depth - 1));
      default: return set_comp(set_expr(depth - 1));
    }
  }

  IntExpr linear() {
    IntExpr e;
    const std::size_t n = 1 + pick(2);
    for (std::size_t i = 0; i < n; ++i) {
      long c = 0;
      while (c == 0) c = uniform(-cfg_.max_coeff, cfg_.max_coeff);
      IntExpr t;
      if (!ints_.empty() && coin(0.25)) t = int_var(ints_[pick(ints_.size())]);
      else t = card(pool_[pick(pool_.size())]);
      t = c == 1 ? t : int_mul(BigInt(c), t);
      e = e ? int_add(e, t) : t;
    }
    return e;
  }

  QfbapaFormula atom() {
    if (!pool_.empty() && coin(cfg_.set_atom_rate)) {
      SetExpr a = pool_[pick(pool_.size())], b = pool_[pick(pool_.size())];
      return coin(0.5) ? qf_subset(a, b) : qf_set_eq(a, b);
    }
    IntExpr lhs = pool_.empty() && ints_.empty() ? int_const(0) : linear();
    IntExpr rhs = int_const(BigInt(uniform(-cfg_.max_constant, cfg_.max_constant)));
    switch (pick(3)) {
      case 0: return qf_int_le(lhs, rhs);
      case 1: return qf_int_le(rhs, lhs);
      default: return qf_int_eq(lhs, rhs);
    }
  }

  const RandomQfbapaConfig& cfg_;
  std::mt19937_64& rng_;
  std::vector<std::string> sets_, ints_;
  std::vector<SetExpr> pool_;
};

}  // namespace

QfbapaFormula random_qfbapa(const RandomQfbapaConfig& cfg, std::mt19937_64& rng) {
  return QGen(cfg, rng).gen(cfg.bool_depth);
}

}  // namespace gnnv::arith
