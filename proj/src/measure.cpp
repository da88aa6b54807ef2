#include "endcharge/measure.hpp"

#include <utility>

#include "endcharge/errors.hpp"

namespace endcharge {

MeasureState MeasureState::declared(TreePtr tree) {
  std::vector<Rational> blocks(tree->size());
  std::vector<ExtendedMass> tails(tree->size());
  for (NodeId v = 0; v < tree->size(); ++v) {
    if (tree->is_end(v)) {
      tails[v] = tree->tail(v);
    } else {
      blocks[v] = tree->weight(v);
    }
  }
  return MeasureState(std::move(tree), std::move(blocks), std::move(tails));
}

MeasureState::MeasureState(TreePtr tree, std::vector<Rational> blocks, std::vector<ExtendedMass> tails)
    : tree_(std::move(tree)), blocks_(std::move(blocks)), tails_(std::move(tails)) {
  const std::size_t n = tree_->size();
  if (blocks_.size() != n || tails_.size() != n) {
    throw Error(ErrorCode::kInvalidMeasure, "measure does not cover the tree");
  }
  for (NodeId v = 0; v < n; ++v) {
    if (tree_->is_end(v)) {
      blocks_[v] = 0;
      if (tails_[v].is_finite() && tails_[v].value() <= 0) {
        throw Error(ErrorCode::kInvalidMeasure, "non-positive tail at " + tree_->name(v));
      }
    } else {
      tails_[v] = ExtendedMass();
      if (blocks_[v] <= 0) {
        throw Error(ErrorCode::kInvalidMeasure, "non-positive block at " + tree_->name(v));
      }
    }
  }
}

const Rational& MeasureState::block(NodeId v) const {
  if (tree_->is_end(v)) {
    throw Error(ErrorCode::kMalformedRegion, tree_->name(v) + " is an End leaf, not a block");
  }
  return blocks_.at(v);
}

const ExtendedMass& MeasureState::tail(NodeId leaf) const {
  if (!tree_->is_end(leaf)) {
    throw Error(ErrorCode::kMalformedRegion, tree_->name(leaf) + " is not an End leaf");
  }
  return tails_.at(leaf);
}

ExtendedMass MeasureState::node_mass(NodeId v) const {
  return tree_->is_end(v) ? tails_.at(v) : ExtendedMass(blocks_.at(v));
}

void MeasureState::set_block(NodeId v, const Rational& m) {
  if (tree_->is_end(v)) {
    throw Error(ErrorCode::kMalformedRegion, tree_->name(v) + " is an End leaf, not a block");
  }
  if (m <= 0) {
    throw Error(ErrorCode::kNonPositiveBlock,
                "block " + tree_->name(v) + " would hold " + format_rational(m));
  }
  blocks_.at(v) = m;
}

void MeasureState::set_tail(NodeId leaf, const ExtendedMass& m) {
  if (!tree_->is_end(leaf)) {
    throw Error(ErrorCode::kMalformedRegion, tree_->name(leaf) + " is not an End leaf");
  }
  if (m.is_finite() && m.value() <= 0) {
    throw Error(ErrorCode::kNonPositiveBlock,
                "tail " + tree_->name(leaf) + " would hold " + m.to_string());
  }
  tails_.at(leaf) = m;
}

bool operator==(const MeasureState& lhs, const MeasureState& rhs) {
  return same_tree(lhs.tree_, rhs.tree_) && lhs.blocks_ == rhs.blocks_ && lhs.tails_ == rhs.tails_;
}

ExtendedMass mass(const MeasureState& mu, const Region& region) {
  require_same_tree(mu.tree(), region.tree(), "measure and region");
  ExtendedMass total;
  for (NodeId v : region.nodes()) {
    total += mu.node_mass(v);
  }
  return total;
}

EndSet omega_finite_ends(const MeasureState& mu) {
  std::vector<NodeId> leaves;
  for (NodeId leaf : mu.tree()->end_leaves()) {
    if (mu.tail(leaf).is_finite()) {
      leaves.push_back(leaf);
    }
  }
  return EndSet(mu.tree(), leaves);
}

bool mu_equivalent(const MeasureState& mu, const Region& a, const Region& b) {
  const Region diff = (a - b) | (b - a);
  return mass(mu, diff).is_finite();
}

Rational j_value(const MeasureState& mu, const Region& a, const Region& b) {
  const ExtendedMass ab = mass(mu, a - b);
  const ExtendedMass ba = mass(mu, b - a);
  if (ab.is_infinite() || ba.is_infinite()) {
    throw Error(ErrorCode::kInfiniteDifference, "regions are not mu-equivalent");
  }
  return ab.value() - ba.value();
}

bool is_regular(const MeasureState& mu, const MeasureState& reference) {
  return same_tree(mu.tree(), reference.tree());
}

}  // namespace endcharge
