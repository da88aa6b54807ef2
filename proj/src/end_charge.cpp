#include "endcharge/end_charge.hpp"

#include <utility>

#include "endcharge/errors.hpp"

namespace endcharge {

EndCharge::EndCharge(TreePtr tree) : tree_(std::move(tree)), values_(tree_->size()) {}

EndCharge EndCharge::zero(TreePtr tree) { return EndCharge(std::move(tree)); }

const Rational& EndCharge::value(NodeId leaf) const {
  if (leaf >= values_.size() || !tree_->is_end(leaf)) {
    throw Error(ErrorCode::kMalformedRegion, "charge queried off the End leaves");
  }
  return values_[leaf];
}

void EndCharge::set(NodeId leaf, const Rational& value) {
  if (leaf >= values_.size() || !tree_->is_end(leaf)) {
    throw Error(ErrorCode::kMalformedRegion, "charge assigned off the End leaves");
  }
  values_[leaf] = value;
}

bool EndCharge::is_zero() const {
  for (const auto& v : values_) {
    if (v != 0) {
      return false;
    }
  }
  return true;
}

Rational EndCharge::max_abs() const {
  Rational best = 0;
  for (const auto& v : values_) {
    Rational a = abs_value(v);
    if (a > best) {
      best = a;
    }
  }
  return best;
}

EndCharge EndCharge::operator-() const {
  EndCharge out(tree_);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    out.values_[i] = -values_[i];
  }
  return out;
}

bool operator==(const EndCharge& lhs, const EndCharge& rhs) {
  return same_tree(lhs.tree_, rhs.tree_) && lhs.values_ == rhs.values_;
}

Rational charge_eval(const EndCharge& c, const EndSet& ends) {
  require_same_tree(c.tree(), ends.tree(), "charge and end set");
  Rational total = 0;
  for (NodeId leaf : ends.leaves()) {
    total += c.value(leaf);
  }
  return total;
}

bool validate_charge(const MeasureState& mu, const EndCharge& c) {
  if (!same_tree(mu.tree(), c.tree())) {
    return false;
  }
  Rational total = 0;
  for (NodeId leaf : c.tree()->end_leaves()) {
    total += c.value(leaf);
    if (mu.tail(leaf).is_finite() && c.value(leaf) != 0) {
      return false;
    }
  }
  return total == 0;
}

EndCharge linear_combine(const Rational& alpha, const EndCharge& c1, const Rational& beta, const EndCharge& c2) {
  require_same_tree(c1.tree(), c2.tree(), "charges");
  EndCharge out = EndCharge::zero(c1.tree());
  for (NodeId leaf : c1.tree()->end_leaves()) {
    out.set(leaf, alpha * c1.value(leaf) + beta * c2.value(leaf));
  }
  return out;
}

}  // namespace endcharge
