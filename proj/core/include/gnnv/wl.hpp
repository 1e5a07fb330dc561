#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "gnnv/formula.hpp"
#include "gnnv/graph.hpp"

namespace gnnv::wl {

using ColorId = std::uint32_t;

/// Structure behind a color id: either an initial label or a refined pair
/// (previous color, sorted multiset of successor colors).
struct ColorKey {
  bool is_init = true;
  Label label;
  ColorId prev = 0;
  std::vector<ColorId> multiset;
};

/// Interning table shared by every coloring that must be comparable.
class ColorTable {
 public:
  ColorId intern_init(const Label& label);
  ColorId intern_node(ColorId prev, std::vector<ColorId> sorted_multiset);
  const ColorKey& key(ColorId c) const { return keys_[c]; }
  std::size_t size() const { return keys_.size(); }

 private:
  ColorId intern(std::string code, ColorKey key);
  std::unordered_map<std::string, ColorId> index_;
  std::vector<ColorKey> keys_;
};

struct Coloring {
  std::vector<ColorId> assignment;
  std::shared_ptr<ColorTable> table;

  std::size_t class_count() const;
};

struct RefinementTrace {
  std::vector<Coloring> rounds;  // rounds 0 .. stable_round + 1
  std::size_t stable_round = 0;

  /// cr(G): the coloring of round stable_round + 1.
  const Coloring& stable() const { return rounds.back(); }
};

Coloring initial_coloring(const LabelledGraph& g, std::shared_ptr<ColorTable> table = nullptr);
Coloring refine(const LabelledGraph& g, const Coloring& coloring);
RefinementTrace color_refinement(const LabelledGraph& g, std::shared_ptr<ColorTable> table = nullptr);

/// Same induced partition on the same vertex set.
bool labellings_equivalent(std::span<const ColorId> a, std::span<const ColorId> b);

/// Equal stable color histograms, computed on the disjoint union.
bool cr_indist_graphs(const LabelledGraph& g, const LabelledGraph& h);
bool cr_indist_pointed(const LabelledGraph& g, Vertex u, const LabelledGraph& h, Vertex v);

/// Stable colors of ordered vertex pairs; color of (u,v) is at u * n + v.
struct PairColoring {
  std::size_t n = 0;
  std::vector<ColorId> assignment;
  std::size_t rounds = 0;

  ColorId at(Vertex u, Vertex v) const { return assignment[static_cast<std::size_t>(u) * n + v]; }
  std::map<ColorId, std::size_t> histogram() const;
};

enum class PairTest { Owl2, Fwl2 };

inline constexpr std::size_t kPairTestCap = 64;

/// Runs the pair test on several graphs in lockstep with one interning table,
/// until the joint partition stops splitting. Throws LimitExceeded when a
/// graph exceeds the cap.
std::vector<PairColoring> pair_refinement(std::span<const LabelledGraph* const> graphs, PairTest test,
                                          std::size_t cap = kPairTestCap);
PairColoring owl2(const LabelledGraph& g, std::size_t cap = kPairTestCap);
PairColoring fwl2(const LabelledGraph& g, std::size_t cap = kPairTestCap);
bool pair_indist_graphs(const LabelledGraph& g, const LabelledGraph& h, PairTest test,
                        std::size_t cap = kPairTestCap);

/// GML formula phi such that (G', u') |= phi iff the round-t color of u' equals
/// the round-t color of u in g. Needs Boolean labels.
Formula characteristic_formula(const LabelledGraph& g, Vertex u, std::size_t t);

}  // namespace gnnv::wl
