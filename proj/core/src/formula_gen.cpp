#include "gnnv/formula_gen.hpp"

#include <algorithm>

namespace gnnv {

namespace {

class Generator {
 public:
  Generator(const RandomFormulaConfig& cfg, std::mt19937_64& rng) : cfg_(cfg), rng_(rng) {}

  Formula gen(std::size_t size, std::size_t depth) {
    if (size <= 1) return literal_or_prop(false);
    const int choice = uniform(0, 9);
    if (choice <= 1) return neg(gen(size - 1, depth));
    if (choice <= 4 && size >= 3) {
      const std::size_t left = uniform_size(1, size - 2);
      Formula a = gen(left, depth);
      Formula b = gen(size - 1 - left, depth);
      return choice <= 2 ? conj(a, b) : disj(a, b);
    }
    if (depth == 0) return literal_or_prop(true);
    if (!cfg_.counting || choice <= 7) {
      Formula a = gen(size - 1, depth - 1);
      return uniform(0, 1) ? diamond(a) : box(a);
    }
    return linear(size, depth);
  }

 private:
  Formula literal_or_prop(bool allow_neg) {
    Formula p = prop(cfg_.props[uniform_size(0, cfg_.props.size() - 1)]);
    return allow_neg && uniform(0, 1) ? neg(p) : p;
  }

  Formula linear(std::size_t size, std::size_t depth) {
    std::size_t budget = size - 1;
    LinExpr xi(BigInt(uniform(-cfg_.max_constant, cfg_.max_constant)));
    const int terms = budget >= 2 ? uniform(1, 2) : 1;
    for (int i = 0; i < terms && budget > 0; ++i) {
      const std::size_t part = i + 1 == terms ? budget : uniform_size(1, budget - 1);
      budget -= part;
      long c = 0;
      while (c == 0) c = uniform(-cfg_.max_coeff, cfg_.max_coeff);
      AtomKind kind = AtomKind::Count;
      const int k = uniform(0, 5);
      if (cfg_.indicators && k == 0) kind = AtomKind::Ind;
      if (cfg_.global_counts && k == 1) kind = AtomKind::GCount;
      Formula arg = gen(part, kind == AtomKind::Ind ? depth : depth - 1);
      xi.add_term(BigInt(c), kind, arg);
    }
    return lin_ge(std::move(xi));
  }

  long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  std::size_t uniform_size(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }

  const RandomFormulaConfig& cfg_;
  std::mt19937_64& rng_;
};

}  // namespace

Formula random_formula(const RandomFormulaConfig& cfg, std::mt19937_64& rng) {
  const std::size_t size = std::uniform_int_distribution<std::size_t>(std::min(cfg.min_size, cfg.max_size), cfg.max_size)(rng);
  return Generator(cfg, rng).gen(size, cfg.max_modal_depth);
}

}  // namespace gnnv
