#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "endcharge/rational.hpp"

namespace endcharge {

using NodeId = std::size_t;

enum class LeafKind { kInterior, kEnd, kClosed };

// Raw description of one node, as read from JSON. End leaves carry a tail
// and no block weight; every other node carries a block weight.
struct NodeSpec {
  std::string id;
  std::optional<Rational> weight;
  std::vector<std::string> children;
  LeafKind leaf = LeafKind::kInterior;
  ExtendedMass tail;
};

class BalloonTree;
using TreePtr = std::shared_ptr<const BalloonTree>;

/// Finite rooted tree of compact blocks with End leaves standing for the
/// cylinders of the end space at the truncation depth. Each non-root node v
/// names the edge (parent(v), v); flux fields are indexed that way.
class BalloonTree {
 public:
  // Indexes the specs without checking invariants. Throws Error(kParse) on
  // duplicate ids, dangling child references or an unknown root.
  static TreePtr from_specs(std::vector<NodeSpec> specs, std::string_view root);
  // from_specs, then throws Error(kInvalidTree) if validate_tree reports anything.
  static TreePtr make(std::vector<NodeSpec> specs, std::string_view root);

  std::size_t size() const noexcept { return specs_.size(); }
  NodeId root() const noexcept { return root_; }
  const std::vector<NodeSpec>& specs() const noexcept { return specs_; }

  const std::string& name(NodeId v) const { return specs_.at(v).id; }
  std::optional<NodeId> find(std::string_view name) const;
  // Throws Error(kMalformedRegion) for unknown names.
  NodeId id(std::string_view name) const;

  const std::vector<NodeId>& children(NodeId v) const { return children_.at(v); }
  std::optional<NodeId> parent(NodeId v) const;
  LeafKind leaf_kind(NodeId v) const { return specs_.at(v).leaf; }
  bool is_end(NodeId v) const { return leaf_kind(v) == LeafKind::kEnd; }
  bool is_block(NodeId v) const { return !is_end(v); }
  // Declared block weight; zero for End leaves.
  Rational weight(NodeId v) const;
  // Declared tail mass of an End leaf.
  const ExtendedMass& tail(NodeId v) const { return specs_.at(v).tail; }

  // True when parent links form a single tree reachable from the root. The
  // accessors below are only meaningful on well-formed trees.
  bool well_formed() const noexcept { return well_formed_; }
  std::size_t depth(NodeId v) const { return depth_.at(v); }
  const std::vector<NodeId>& preorder() const noexcept { return preorder_; }
  const std::vector<NodeId>& end_leaves() const noexcept { return end_leaves_; }
  const std::vector<NodeId>& blocks() const noexcept { return blocks_; }
  // Ancestor-or-self.
  bool is_ancestor(NodeId ancestor, NodeId v) const;
  std::vector<NodeId> subtree(NodeId top) const;
  std::vector<NodeId> subtree_ends(NodeId top) const;
  std::size_t max_depth() const;

  friend bool operator==(const BalloonTree& lhs, const BalloonTree& rhs);

 private:
  BalloonTree() = default;

  std::vector<NodeSpec> specs_;
  std::unordered_map<std::string, NodeId> index_;
  NodeId root_ = 0;
  std::vector<std::vector<NodeId>> children_;
  std::vector<std::vector<NodeId>> parents_;
  bool well_formed_ = false;
  std::vector<std::size_t> depth_;
  std::vector<NodeId> preorder_;
  std::vector<std::size_t> enter_;
  std::vector<std::size_t> leave_;
  std::vector<NodeId> end_leaves_;
  std::vector<NodeId> blocks_;

  friend std::vector<std::string> validate_tree(const BalloonTree& tree);
};

// One human-readable entry per violated invariant; empty when valid.
std::vector<std::string> validate_tree(const BalloonTree& tree);

bool same_tree(const TreePtr& lhs, const TreePtr& rhs);
// Throws Error(kTreeMismatch).
void require_same_tree(const TreePtr& lhs, const TreePtr& rhs, std::string_view what);

/// A node subset standing for a Borel set with compact frontier. Holding an
/// End leaf means holding its whole tail.
class Region {
 public:
  // Throws Error(kMalformedRegion) for ids outside the tree.
  Region(TreePtr tree, std::span<const NodeId> nodes);
  static Region from_names(TreePtr tree, std::span<const std::string> names);
  static Region empty(TreePtr tree);
  static Region all(TreePtr tree);
  static Region subtree(TreePtr tree, NodeId top);

  const TreePtr& tree() const noexcept { return tree_; }
  bool contains(NodeId v) const { return v < members_.size() && members_[v] != 0; }
  std::vector<NodeId> nodes() const;
  std::size_t count() const;
  bool is_empty() const { return count() == 0; }
  // No End leaf, so the modeled set is relatively compact.
  bool is_compact() const;

  Region complement() const;
  friend Region operator|(const Region& lhs, const Region& rhs);
  friend Region operator&(const Region& lhs, const Region& rhs);
  friend Region operator-(const Region& lhs, const Region& rhs);
  friend bool operator==(const Region& lhs, const Region& rhs);

 private:
  Region(TreePtr tree, std::vector<char> members);

  TreePtr tree_;
  std::vector<char> members_;
};

/// A clopen set of ends: a subset of End leaves. The powerset of End leaves
/// is the whole clopen algebra at the truncation depth.
class EndSet {
 public:
  // Throws Error(kMalformedRegion) for ids that are not End leaves.
  EndSet(TreePtr tree, std::span<const NodeId> leaves);
  static EndSet from_names(TreePtr tree, std::span<const std::string> names);
  static EndSet empty(TreePtr tree);
  static EndSet all(TreePtr tree);

  const TreePtr& tree() const noexcept { return tree_; }
  bool contains(NodeId leaf) const { return leaf < members_.size() && members_[leaf] != 0; }
  std::vector<NodeId> leaves() const;
  bool is_empty() const;

  EndSet complement() const;
  EndSet unite(const EndSet& other) const;
  EndSet intersect(const EndSet& other) const;
  bool is_disjoint(const EndSet& other) const;
  friend bool operator==(const EndSet& lhs, const EndSet& rhs);

 private:
  EndSet(TreePtr tree, std::vector<char> members);

  TreePtr tree_;
  std::vector<char> members_;
};

EndSet region_ends(const Region& region);
// Symmetric difference holds no End leaf.
bool compactly_equivalent(const Region& a, const Region& b);

}  // namespace endcharge
