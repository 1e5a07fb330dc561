#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "gnnv/formula.hpp"
#include "gnnv/graph.hpp"

namespace gnnv {

using Matrix = std::vector<std::vector<Rational>>;

struct GnnLayer {
  Matrix A;                 // d_t x d_{t-1}, applied to the vertex itself
  Matrix B;                 // d_t x d_{t-1}, applied to the sum over successors
  std::vector<Rational> b;  // d_t
};

/// Aggregate-combine GNN with truncated ReLU and a linear readout
/// "w . l_L(u) + b >= 0".
struct GnnModel {
  std::size_t input_dim = 0;
  std::vector<GnnLayer> layers;
  std::vector<Rational> readout_w;
  Rational readout_b;
  /// Proposition names of the input features; empty means x1..xd.
  std::vector<std::string> feature_names;

  std::size_t output_dim() const { return layers.empty() ? input_dim : layers.back().b.size(); }
  /// Names used when features are read as propositions.
  std::vector<std::string> prop_names() const;
  /// Throws InputError unless every dimension chains correctly.
  void validate() const;
};

GnnModel parse_gnn(std::string_view text);
std::string print_gnn(const GnnModel& n);
GnnModel load_gnn_file(const std::string& path);

Rational truncrelu(const Rational& x);

struct ForwardResult {
  /// layers[t][u] is l_t(u); layers[0] holds the input labels.
  std::vector<std::vector<Label>> layers;
  std::vector<bool> accept;
};

ForwardResult forward(const GnnModel& n, const LabelledGraph& g);

/// Random model with entries k / denominator, |k| <= 3 * denominator.
GnnModel random_gnn(std::size_t input_dim, const std::vector<std::size_t>& layer_dims,
                    std::uint64_t denominator, std::uint64_t seed);

/// Least common multiple of the denominators of all layer weights and biases.
BigInt common_denominator(const GnnModel& n);

}  // namespace gnnv
