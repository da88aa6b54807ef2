#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "endcharge/balloon_tree.hpp"
#include "endcharge/end_charge.hpp"
#include "endcharge/measure.hpp"
#include "endcharge/pl1d_oracle.hpp"
#include "endcharge/proper_morphism.hpp"
#include "endcharge/transport.hpp"

namespace endcharge {

using Rng = std::mt19937_64;

// Uniform integer in [lo, hi]; modulo reduction keeps draws identical
// across standard libraries for a fixed seed.
std::uint64_t draw(Rng& rng, std::uint64_t lo, std::uint64_t hi);
bool coin(Rng& rng, unsigned percent);
// Small positive rational with numerator <= 12 and denominator <= 6.
Rational draw_positive(Rng& rng);

struct TreeShape {
  std::size_t max_depth = 6;
  std::size_t max_nodes = 64;
  std::size_t max_children = 3;
  unsigned infinite_percent = 60;
};

// Declared weights and tails are random; names are "n<k>" in creation order.
TreePtr random_tree(Rng& rng, const TreeShape& shape = {});
// Same tree with fresh block weights and finite tail values.
MeasureState random_measure(Rng& rng, const TreePtr& tree);
// Zero total, zero on finite tails; zero when fewer than two tails are infinite.
EndCharge random_charge(Rng& rng, const MeasureState& mu);
// Measure-preserving word from mu that never touches the frozen nodes.
MoveWord random_preserving_word(Rng& rng, const MeasureState& mu, std::size_t moves = 8,
                                const std::vector<NodeId>& frozen = {});
// Random node subset; End leaves included with the given percentage.
Region random_region(Rng& rng, const TreePtr& tree, unsigned end_percent = 50);

RayStar random_star(Rng& rng, std::size_t max_rays = 5, std::size_t max_depth = 4);

// Source tree = target plus Closed appendages hanging below random blocks;
// the appendages collapse onto their attachment node.
TreeMorphism random_morphism(Rng& rng, const TreePtr& target);

struct Refinement {
  MeasureState coarse;
  MeasureState fine;
};
// Each End leaf grows `levels` blocks between it and its parent, keeping its
// name; finite tails are split so the coarse blocks keep their masses.
Refinement refine(const MeasureState& mu, std::size_t levels = 2);
// The same charge read on the refined tree through End leaf names.
EndCharge transfer_charge(const EndCharge& a, const TreePtr& onto);

}  // namespace endcharge
