#include "endcharge/balloon_tree.hpp"

#include <algorithm>
#include <utility>

#include "endcharge/errors.hpp"

namespace endcharge {

TreePtr BalloonTree::from_specs(std::vector<NodeSpec> specs, std::string_view root) {
  std::shared_ptr<BalloonTree> tree(new BalloonTree());
  tree->specs_ = std::move(specs);
  const std::size_t n = tree->specs_.size();
  for (NodeId v = 0; v < n; ++v) {
    const auto [it, inserted] = tree->index_.emplace(tree->specs_[v].id, v);
    if (!inserted) {
      throw Error(ErrorCode::kParse, "duplicate node id \"" + tree->specs_[v].id + "\"");
    }
  }
  const auto root_it = tree->index_.find(std::string(root));
  if (root_it == tree->index_.end()) {
    throw Error(ErrorCode::kParse, "unknown root \"" + std::string(root) + "\"");
  }
  tree->root_ = root_it->second;
  tree->children_.assign(n, {});
  tree->parents_.assign(n, {});
  for (NodeId v = 0; v < n; ++v) {
    for (const std::string& child : tree->specs_[v].children) {
      const auto it = tree->index_.find(child);
      if (it == tree->index_.end()) {
        throw Error(ErrorCode::kParse, "node \"" + tree->specs_[v].id + "\" lists unknown child \"" + child + "\"");
      }
      tree->children_[v].push_back(it->second);
      tree->parents_[it->second].push_back(v);
    }
  }

  bool ok = tree->parents_[tree->root_].empty();
  for (NodeId v = 0; v < n && ok; ++v) {
    if (v != tree->root_ && tree->parents_[v].size() != 1) {
      ok = false;
    }
  }
  if (ok) {
    tree->depth_.assign(n, 0);
    tree->enter_.assign(n, 0);
    tree->leave_.assign(n, 0);
    std::vector<char> seen(n, 0);
    // Iterative DFS; the second stack entry field marks the exit visit.
    std::vector<std::pair<NodeId, bool>> stack{{tree->root_, false}};
    std::size_t clock = 0;
    while (!stack.empty() && ok) {
      auto [v, leaving] = stack.back();
      stack.pop_back();
      if (leaving) {
        tree->leave_[v] = clock;
        continue;
      }
      if (seen[v]) {
        ok = false;
        break;
      }
      seen[v] = 1;
      tree->enter_[v] = clock++;
      tree->preorder_.push_back(v);
      stack.emplace_back(v, true);
      const auto& kids = tree->children_[v];
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
        tree->depth_[*it] = tree->depth_[v] + 1;
        stack.emplace_back(*it, false);
      }
    }
    ok = ok && tree->preorder_.size() == n;
  }
  tree->well_formed_ = ok;
  if (ok) {
    for (NodeId v : tree->preorder_) {
      (tree->specs_[v].leaf == LeafKind::kEnd ? tree->end_leaves_ : tree->blocks_).push_back(v);
    }
  } else {
    tree->preorder_.clear();
    tree->depth_.clear();
  }
  return tree;
}

TreePtr BalloonTree::make(std::vector<NodeSpec> specs, std::string_view root) {
  TreePtr tree = from_specs(std::move(specs), root);
  const auto violations = validate_tree(*tree);
  if (!violations.empty()) {
    std::string message = "invalid tree:";
    for (const auto& v : violations) {
      message += " [" + v + "]";
    }
    throw Error(ErrorCode::kInvalidTree, message);
  }
  return tree;
}

std::optional<NodeId> BalloonTree::find(std::string_view name) const {
  const auto it = index_.find(std::string(name));
  if (it == index_.end()) {
    return std::nullopt;
  }
  return it->second;
}

NodeId BalloonTree::id(std::string_view name) const {
  if (auto v = find(name)) {
    return *v;
  }
  throw Error(ErrorCode::kMalformedRegion, "unknown node \"" + std::string(name) + "\"");
}

std::optional<NodeId> BalloonTree::parent(NodeId v) const {
  const auto& ps = parents_.at(v);
  if (ps.empty()) {
    return std::nullopt;
  }
  return ps.front();
}

Rational BalloonTree::weight(NodeId v) const {
  const auto& spec = specs_.at(v);
  if (spec.leaf == LeafKind::kEnd || !spec.weight) {
    return 0;
  }
  return *spec.weight;
}

bool BalloonTree::is_ancestor(NodeId ancestor, NodeId v) const {
  return enter_.at(ancestor) <= enter_.at(v) && leave_.at(v) <= leave_.at(ancestor);
}

std::vector<NodeId> BalloonTree::subtree(NodeId top) const {
  std::vector<NodeId> out;
  for (NodeId v : preorder_) {
    if (is_ancestor(top, v)) {
      out.push_back(v);
    }
  }
  return out;
}

std::vector<NodeId> BalloonTree::subtree_ends(NodeId top) const {
  std::vector<NodeId> out;
  for (NodeId leaf : end_leaves_) {
    if (is_ancestor(top, leaf)) {
      out.push_back(leaf);
    }
  }
  return out;
}

std::size_t BalloonTree::max_depth() const {
  std::size_t d = 0;
  for (std::size_t x : depth_) {
    d = std::max(d, x);
  }
  return d;
}

bool operator==(const BalloonTree& lhs, const BalloonTree& rhs) {
  if (lhs.size() != rhs.size() || lhs.root_ != rhs.root_) {
    return false;
  }
  for (NodeId v = 0; v < lhs.size(); ++v) {
    const NodeSpec& a = lhs.specs_[v];
    const NodeSpec& b = rhs.specs_[v];
    if (a.id != b.id || a.weight != b.weight || a.children != b.children || a.leaf != b.leaf ||
        !(a.tail == b.tail)) {
      return false;
    }
  }
  return true;
}

std::vector<std::string> validate_tree(const BalloonTree& tree) {
  std::vector<std::string> out;
  const std::size_t n = tree.size();
  if (!tree.parents_[tree.root_].empty()) {
    out.push_back("root " + tree.name(tree.root_) + " has a parent");
  }
  for (NodeId v = 0; v < n; ++v) {
    if (v != tree.root_ && tree.parents_[v].size() > 1) {
      out.push_back("multiple parents at " + tree.name(v));
    }
  }
  if (!tree.well_formed_ && out.empty()) {
    out.push_back("not a single rooted tree (unreachable node or cycle)");
  }
  bool has_end = false;
  for (NodeId v = 0; v < n; ++v) {
    const NodeSpec& spec = tree.specs_[v];
    switch (spec.leaf) {
      case LeafKind::kEnd:
        has_end = true;
        if (!tree.children_[v].empty()) {
          out.push_back("End leaf " + spec.id + " has children");
        }
        if (v == tree.root_) {
          out.push_back("root " + spec.id + " is an End leaf");
        }
        if (spec.weight) {
          out.push_back("End leaf " + spec.id + " carries a block weight");
        }
        if (spec.tail.is_finite() && spec.tail.value() <= 0) {
          out.push_back("non-positive tail at " + spec.id);
        }
        break;
      case LeafKind::kClosed:
        if (!tree.children_[v].empty()) {
          out.push_back("Closed leaf " + spec.id + " has children");
        }
        [[fallthrough]];
      case LeafKind::kInterior:
        if (spec.leaf == LeafKind::kInterior && tree.children_[v].empty()) {
          out.push_back("untagged leaf " + spec.id);
        }
        if (!spec.weight || *spec.weight <= 0) {
          out.push_back("non-positive weight at " + spec.id);
        }
        break;
    }
  }
  if (!has_end) {
    out.push_back("no End leaf");
  }
  return out;
}

bool same_tree(const TreePtr& lhs, const TreePtr& rhs) {
  return lhs == rhs || (lhs && rhs && *lhs == *rhs);
}

void require_same_tree(const TreePtr& lhs, const TreePtr& rhs, std::string_view what) {
  if (!same_tree(lhs, rhs)) {
    throw Error(ErrorCode::kTreeMismatch, std::string(what) + " refer to different trees");
  }
}

// ---------------------------------------------------------------- Region

Region::Region(TreePtr tree, std::vector<char> members) : tree_(std::move(tree)), members_(std::move(members)) {}

Region::Region(TreePtr tree, std::span<const NodeId> nodes) : tree_(std::move(tree)), members_(tree_->size(), 0) {
  for (NodeId v : nodes) {
    if (v >= members_.size()) {
      throw Error(ErrorCode::kMalformedRegion, "node index " + std::to_string(v) + " outside the tree");
    }
    members_[v] = 1;
  }
}

Region Region::from_names(TreePtr tree, std::span<const std::string> names) {
  std::vector<NodeId> ids;
  ids.reserve(names.size());
  for (const auto& name : names) {
    ids.push_back(tree->id(name));
  }
  return Region(std::move(tree), ids);
}

Region Region::empty(TreePtr tree) {
  const std::size_t n = tree->size();
  return Region(std::move(tree), std::vector<char>(n, 0));
}

Region Region::all(TreePtr tree) {
  const std::size_t n = tree->size();
  return Region(std::move(tree), std::vector<char>(n, 1));
}

Region Region::subtree(TreePtr tree, NodeId top) {
  const auto nodes = tree->subtree(top);
  return Region(std::move(tree), nodes);
}

std::vector<NodeId> Region::nodes() const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < members_.size(); ++v) {
    if (members_[v]) {
      out.push_back(v);
    }
  }
  return out;
}

std::size_t Region::count() const {
  return static_cast<std::size_t>(std::count(members_.begin(), members_.end(), char{1}));
}

bool Region::is_compact() const {
  for (NodeId leaf : tree_->end_leaves()) {
    if (members_[leaf]) {
      return false;
    }
  }
  return true;
}

Region Region::complement() const {
  std::vector<char> m(members_.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    m[i] = members_[i] ? 0 : 1;
  }
  return Region(tree_, std::move(m));
}

namespace {

template <typename Op>
std::vector<char> combine(const std::vector<char>& a, const std::vector<char>& b, Op op) {
  std::vector<char> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = op(a[i] != 0, b[i] != 0) ? 1 : 0;
  }
  return out;
}

}  // namespace

Region operator|(const Region& lhs, const Region& rhs) {
  require_same_tree(lhs.tree_, rhs.tree_, "regions");
  return Region(lhs.tree_, combine(lhs.members_, rhs.members_, [](bool a, bool b) { return a || b; }));
}

Region operator&(const Region& lhs, const Region& rhs) {
  require_same_tree(lhs.tree_, rhs.tree_, "regions");
  return Region(lhs.tree_, combine(lhs.members_, rhs.members_, [](bool a, bool b) { return a && b; }));
}

Region operator-(const Region& lhs, const Region& rhs) {
  require_same_tree(lhs.tree_, rhs.tree_, "regions");
  return Region(lhs.tree_, combine(lhs.members_, rhs.members_, [](bool a, bool b) { return a && !b; }));
}

bool operator==(const Region& lhs, const Region& rhs) {
  return same_tree(lhs.tree_, rhs.tree_) && lhs.members_ == rhs.members_;
}

// ---------------------------------------------------------------- EndSet

EndSet::EndSet(TreePtr tree, std::vector<char> members) : tree_(std::move(tree)), members_(std::move(members)) {}

EndSet::EndSet(TreePtr tree, std::span<const NodeId> leaves) : tree_(std::move(tree)), members_(tree_->size(), 0) {
  for (NodeId v : leaves) {
    if (v >= members_.size() || !tree_->is_end(v)) {
      throw Error(ErrorCode::kMalformedRegion, "node index " + std::to_string(v) + " is not an End leaf");
    }
    members_[v] = 1;
  }
}

EndSet EndSet::from_names(TreePtr tree, std::span<const std::string> names) {
  std::vector<NodeId> ids;
  for (const auto& name : names) {
    ids.push_back(tree->id(name));
  }
  return EndSet(std::move(tree), ids);
}

EndSet EndSet::empty(TreePtr tree) {
  const std::size_t n = tree->size();
  return EndSet(std::move(tree), std::vector<char>(n, 0));
}

EndSet EndSet::all(TreePtr tree) {
  const auto leaves = tree->end_leaves();
  return EndSet(std::move(tree), leaves);
}

std::vector<NodeId> EndSet::leaves() const {
  std::vector<NodeId> out;
  for (NodeId leaf : tree_->end_leaves()) {
    if (members_[leaf]) {
      out.push_back(leaf);
    }
  }
  return out;
}

bool EndSet::is_empty() const { return leaves().empty(); }

EndSet EndSet::complement() const {
  std::vector<char> m(members_.size(), 0);
  for (NodeId leaf : tree_->end_leaves()) {
    m[leaf] = members_[leaf] ? 0 : 1;
  }
  return EndSet(tree_, std::move(m));
}

EndSet EndSet::unite(const EndSet& other) const {
  require_same_tree(tree_, other.tree_, "end sets");
  return EndSet(tree_, combine(members_, other.members_, [](bool a, bool b) { return a || b; }));
}

EndSet EndSet::intersect(const EndSet& other) const {
  require_same_tree(tree_, other.tree_, "end sets");
  return EndSet(tree_, combine(members_, other.members_, [](bool a, bool b) { return a && b; }));
}

bool EndSet::is_disjoint(const EndSet& other) const { return intersect(other).is_empty(); }

bool operator==(const EndSet& lhs, const EndSet& rhs) {
  return same_tree(lhs.tree_, rhs.tree_) && lhs.members_ == rhs.members_;
}

EndSet region_ends(const Region& region) {
  std::vector<NodeId> leaves;
  for (NodeId leaf : region.tree()->end_leaves()) {
    if (region.contains(leaf)) {
      leaves.push_back(leaf);
    }
  }
  return EndSet(region.tree(), leaves);
}

bool compactly_equivalent(const Region& a, const Region& b) {
  require_same_tree(a.tree(), b.tree(), "regions");
  return region_ends(a) == region_ends(b);
}

}  // namespace endcharge
