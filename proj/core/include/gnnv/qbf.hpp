#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gnnv/formula.hpp"

namespace gnnv::sat {

/// Closed QBF with prefix E p1 A p2 ... E p(2n-1) A p(2n) and a propositional matrix.
struct Qbf {
  std::vector<std::string> vars;  // in prefix order, even length
  Formula matrix = top();
};

/// Text form "E p1 A p2 : matrix". Throws InputError on a prefix that does
/// not alternate starting with E, has odd length, or repeats a variable, and
/// on a non-propositional matrix.
Qbf parse_qbf(const std::string& text);
std::string print_qbf(const Qbf& q);

bool qbf_eval(const Qbf& q);

/// Modal encoding: q is true iff tqbf_to_k(q) is K-satisfiable.
Formula tqbf_to_k(const Qbf& q);

/// Random instance with 2n variables and a matrix of the given Boolean depth.
Qbf random_qbf(std::size_t n, std::size_t depth, std::uint64_t seed);

}  // namespace gnnv::sat
