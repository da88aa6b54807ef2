#pragma once

#include <variant>
#include <vector>

#include "endcharge/balloon_tree.hpp"
#include "endcharge/end_charge.hpp"
#include "endcharge/measure.hpp"
#include "endcharge/rational.hpp"

namespace endcharge {

// Transfer amount from the parent block across (parent, child) into the
// child block, or into the tail when child is an End leaf. Negative amounts
// move mass the other way.
struct BalloonMove {
  NodeId parent = 0;
  NodeId child = 0;
  Rational amount;

  friend bool operator==(const BalloonMove&, const BalloonMove&) = default;
};

// Replace the masses on a connected, tail-free support by masses with the
// same total. Stands in for a compactly supported rearrangement.
struct Rearrange {
  std::vector<NodeId> support;
  std::vector<Rational> masses;  // aligned with support

  friend bool operator==(const Rearrange&, const Rearrange&) = default;
};

using Move = std::variant<BalloonMove, Rearrange>;

/// Net mass moved across each edge, from the parent side into the subtree,
/// indexed by the child node of the edge.
class FluxField {
 public:
  static FluxField zero(TreePtr tree);

  const TreePtr& tree() const noexcept { return tree_; }
  const Rational& at(NodeId child) const;
  void add(NodeId child, const Rational& amount);
  // Inflow minus outflow at v; zero everywhere on blocks iff Kirchhoff holds.
  Rational divergence(NodeId v) const;
  bool is_zero() const;

  friend bool operator==(const FluxField& lhs, const FluxField& rhs);

 private:
  explicit FluxField(TreePtr tree);

  TreePtr tree_;
  std::vector<Rational> values_;
};

struct TransportState {
  MeasureState measure;
  FluxField flux;
};

// A finite composition of moves, applied left to right from base.
struct MoveWord {
  std::vector<Move> moves;
  MeasureState base;

  static MoveWord empty(MeasureState base) { return MoveWord{{}, std::move(base)}; }
  bool is_empty() const noexcept { return moves.empty(); }
  const TreePtr& tree() const noexcept { return base.tree(); }
};

// Throws Error(kBadEdge), Error(kNonPositiveBlock), Error(kMassNotConserved)
// or Error(kBadSupport).
TransportState apply_move(const MeasureState& sigma, const FluxField& flux, const Move& move);
// Left fold of apply_move from (base, 0). Failures surface as WordError
// carrying the 1-based position of the offending move.
TransportState apply_word(const MoveWord& word);

bool is_measure_preserving(const TransportState& final_state, const MeasureState& base);
bool is_measure_preserving(const MoveWord& word);

// Leaf-edge fluxes of a measure-preserving word. Throws Error(kCNotDefined).
EndCharge charge_of_word(const MoveWord& word);
EndCharge charge_of_flux(const TransportState& final_state, const MeasureState& base);

// Reverses the order, negates transfers and swaps rearrangement masses. The
// result starts from the final state of word.
MoveWord invert_word(const MoveWord& word);
MoveWord concat(const MoveWord& first, const MoveWord& second);

// Net mass carried inward across the frontier of region.
Rational region_transfer(const FluxField& flux, const Region& region);
Rational region_transfer(const MoveWord& word, const Region& region);

// Same final state and same flux field.
bool extensionally_equal(const MoveWord& lhs, const MoveWord& rhs);

}  // namespace endcharge
