#pragma once

#include <string>
#include <vector>

#include "endcharge/balloon_tree.hpp"
#include "endcharge/rational.hpp"

namespace endcharge {

/// Block masses and tail masses of a Radon measure at block granularity.
/// Every block mass and every finite tail is strictly positive.
class MeasureState {
 public:
  // The weights and tails declared in the tree itself.
  static MeasureState declared(TreePtr tree);

  // blocks and tails are indexed by NodeId; entries for the other kind of
  // node are ignored. Throws Error(kInvalidMeasure) on non-positive entries.
  MeasureState(TreePtr tree, std::vector<Rational> blocks, std::vector<ExtendedMass> tails);

  const TreePtr& tree() const noexcept { return tree_; }
  const Rational& block(NodeId v) const;
  const ExtendedMass& tail(NodeId leaf) const;
  // Block mass for blocks, tail mass for End leaves.
  ExtendedMass node_mass(NodeId v) const;

  // Throw Error(kNonPositiveBlock) instead of storing a non-positive mass.
  void set_block(NodeId v, const Rational& mass);
  void set_tail(NodeId leaf, const ExtendedMass& mass);

  friend bool operator==(const MeasureState& lhs, const MeasureState& rhs);

 private:
  TreePtr tree_;
  std::vector<Rational> blocks_;
  std::vector<ExtendedMass> tails_;
};

ExtendedMass mass(const MeasureState& mu, const Region& region);
EndSet omega_finite_ends(const MeasureState& mu);
// mu(A delta B) < inf, i.e. every End leaf in the symmetric difference is finite.
bool mu_equivalent(const MeasureState& mu, const Region& a, const Region& b);
// mu(A - B) - mu(B - A). Throws Error(kInfiniteDifference) unless mu_equivalent.
Rational j_value(const MeasureState& mu, const Region& a, const Region& b);
// Same null sets as the reference. At block granularity all masses are
// positive, so this reduces to both states living on the same tree.
bool is_regular(const MeasureState& mu, const MeasureState& reference);

}  // namespace endcharge
