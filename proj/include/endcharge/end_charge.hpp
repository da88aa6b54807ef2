#pragma once

#include <vector>

#include "endcharge/balloon_tree.hpp"
#include "endcharge/measure.hpp"
#include "endcharge/rational.hpp"

namespace endcharge {

// Finitely additive charge on the clopen algebra of ends, stored by its
// values on End leaves (the atoms of the truncated algebra).
class EndCharge {
 public:
  static EndCharge zero(TreePtr tree);

  const TreePtr& tree() const noexcept { return tree_; }
  // Throws Error(kMalformedRegion) when leaf is not an End leaf.
  const Rational& value(NodeId leaf) const;
  void set(NodeId leaf, const Rational& value);
  bool is_zero() const;
  // Largest absolute leaf value.
  Rational max_abs() const;

  EndCharge operator-() const;
  friend bool operator==(const EndCharge& lhs, const EndCharge& rhs);

 private:
  explicit EndCharge(TreePtr tree);

  TreePtr tree_;
  std::vector<Rational> values_;
};

Rational charge_eval(const EndCharge& c, const EndSet& ends);
// Membership in the space of charges with zero total that vanish on
// omega-finite ends.
bool validate_charge(const MeasureState& mu, const EndCharge& c);
// alpha*c1 + beta*c2. Throws Error(kTreeMismatch).
EndCharge linear_combine(const Rational& alpha, const EndCharge& c1, const Rational& beta, const EndCharge& c2);

}  // namespace endcharge
