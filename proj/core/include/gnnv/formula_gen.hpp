#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "gnnv/formula.hpp"

namespace gnnv {

struct RandomFormulaConfig {
  std::vector<std::string> props{"p", "q"};
  std::size_t max_modal_depth = 2;
  /// Upper bound on connectives plus propositions, counting a diamond or box as one.
  std::size_t max_size = 8;
  std::size_t min_size = 1;
  /// false: diamonds and boxes only. true: general linear atoms as well.
  bool counting = false;
  bool indicators = false;
  bool global_counts = false;
  long max_coeff = 3;
  long max_constant = 5;
};

Formula random_formula(const RandomFormulaConfig& cfg, std::mt19937_64& rng);

}  // namespace gnnv
