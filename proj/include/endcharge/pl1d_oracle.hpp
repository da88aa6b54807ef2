#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "endcharge/balloon_tree.hpp"
#include "endcharge/end_charge.hpp"
#include "endcharge/measure.hpp"
#include "endcharge/rational.hpp"
#include "endcharge/transport.hpp"

namespace endcharge {

/// A star of rays in measured form: a center block (the root) with at least
/// two chains of unit cells, each ending in an End leaf. Component 0 is the
/// center; component i + 1 is ray i.
class RayStar {
 public:
  // Throws Error(kNotAStar) unless the tree has that shape.
  static RayStar from_measure(MeasureState mu);
  // Builds the tree with nodes "c", "r<i>_<k>" and "e<i>" (1-based).
  static RayStar make(const Rational& center, const std::vector<std::vector<Rational>>& cells,
                      const std::vector<ExtendedMass>& tails);

  const TreePtr& tree() const noexcept { return measure_.tree(); }
  const MeasureState& measure() const noexcept { return measure_; }
  std::size_t ray_count() const noexcept { return rays_.size(); }
  // Cell nodes of ray i from the center outward.
  const std::vector<NodeId>& cells(std::size_t ray) const { return rays_.at(ray); }
  NodeId end_leaf(std::size_t ray) const { return ends_.at(ray); }
  std::size_t depth(std::size_t ray) const { return rays_.at(ray).size(); }
  std::size_t max_depth() const;
  // Ray holding v, or nullopt for the center.
  std::optional<std::size_t> ray_of(NodeId v) const;

 private:
  explicit RayStar(MeasureState mu) : measure_(std::move(mu)) {}

  MeasureState measure_;
  std::vector<std::vector<NodeId>> rays_;
  std::vector<NodeId> ends_;
  std::vector<std::size_t> ray_index_;
};

// Half-open interval [lo, hi); hi == nullopt means unbounded.
struct Span {
  Rational lo;
  std::optional<Rational> hi;
};

/// Finite union of bounded half-open intervals on each component.
class IntervalSet {
 public:
  void add(std::size_t component, const Rational& lo, const Rational& hi);
  IntervalSet unite(const IntervalSet& other) const;
  IntervalSet subtract(const IntervalSet& other) const;
  IntervalSet intersect(const IntervalSet& other) const;
  Rational measure() const;
  bool is_empty() const { return parts_.empty(); }
  const std::map<std::size_t, std::vector<std::pair<Rational, Rational>>>& parts() const noexcept { return parts_; }

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  std::map<std::size_t, std::vector<std::pair<Rational, Rational>>> parts_;
};

/// Piecewise translation between the mass coordinates of two states: each
/// piece sends [lo, hi) on component src to [lo + shift, hi + shift) on dst.
/// Unit slope everywhere, so Lebesgue measure is carried to Lebesgue measure.
class PLMap {
 public:
  struct Piece {
    std::size_t src = 0;
    Span span;
    std::size_t dst = 0;
    Rational shift;
  };

  static PLMap identity(std::size_t components);
  static PLMap from_pieces(std::vector<Piece> pieces);

  const std::vector<Piece>& pieces() const noexcept { return pieces_; }
  // Throws Error(kRange) outside the domain.
  std::pair<std::size_t, Rational> apply(std::size_t component, const Rational& x) const;
  PLMap inverse() const;
  IntervalSet image(const IntervalSet& set) const;
  IntervalSet preimage(const IntervalSet& set) const { return inverse().image(set); }
  // Shift of the unbounded piece of a component, if it has one.
  std::optional<Rational> eventual_translation(std::size_t component) const;
  // Largest finite breakpoint or image breakpoint on any component.
  Rational reach() const;

  friend bool operator==(const PLMap&, const PLMap&);

 private:
  void normalize();

  std::vector<Piece> pieces_;
};

// outer after inner.
PLMap compose(const PLMap& outer, const PLMap& inner);

// Mass coordinates of the blocks of a state on the star, bounded by window
// for infinite tails.
IntervalSet node_interval(const RayStar& star, const MeasureState& sigma, NodeId v, const Rational& window);

struct Realization {
  PLMap map;  // base mass coordinates -> final mass coordinates
  MeasureState state;
};

// Realizes any applicable word move by move. Throws Error(kTreeMismatch)
// when the word does not start from the star's measure.
Realization realize_moves(const RayStar& star, const MoveWord& w);
// Throws Error(kCNotDefined) for words that are not measure-preserving.
PLMap realize_word(const RayStar& star, const MoveWord& w);

// Mass coordinate of physical position x >= depth on a ray: unit cells,
// then a tail whose cumulative mass beyond the last cell is
// tail * s / (s + 1) for finite tails and s for infinite ones.
Rational cut_coordinate(const RayStar& star, std::size_t ray, const Rational& x);

// mu(C - h(C)) - mu(h(C) - C) for C the part of each ray beyond physical
// position cut. Throws Error(kCutTooShallow) when cut is below a ray's depth.
EndCharge charge_from_definition(const RayStar& star, const PLMap& h, const Rational& cut);
// Net mass carried by h into the part of the ray beyond the start of v.
Rational transfer_into(const RayStar& star, const PLMap& h, NodeId v);

// charge_from_definition at each cut agrees with charge_of_word.
bool compare_oracle(const RayStar& star, const MoveWord& w, const std::vector<Rational>& cuts = {});

// J for two node sets under sigma, computed from block masses and from
// Lebesgue measure of their preimages under the realization of w.
std::pair<Rational, Rational> pushforward_j(const RayStar& star, const MoveWord& w, const std::vector<NodeId>& a,
                                            const std::vector<NodeId>& b);

}  // namespace endcharge
