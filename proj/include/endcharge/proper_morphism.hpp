#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "endcharge/balloon_tree.hpp"
#include "endcharge/end_charge.hpp"
#include "endcharge/measure.hpp"
#include "endcharge/section.hpp"
#include "endcharge/transport.hpp"

namespace endcharge {

/// Ends-bijective contraction of a source tree onto a target tree. Each
/// fiber is a connected subtree with a single top node; the other fiber
/// nodes ("collapsed" nodes) hang below the top, carry no End leaves and are
/// never touched by liftable words.
class TreeMorphism {
 public:
  // Throws Error(kInvalidMorphism) unless node_map is such a contraction.
  static TreeMorphism make(TreePtr source, TreePtr target, std::vector<NodeId> node_map);
  // Every source node must be mapped. Throws Error(kInvalidMorphism).
  static TreeMorphism from_names(TreePtr source, TreePtr target, const std::map<std::string, std::string>& map);
  static TreeMorphism identity(TreePtr tree);

  const TreePtr& source() const noexcept { return source_; }
  const TreePtr& target() const noexcept { return target_; }
  NodeId image(NodeId v) const { return map_.at(v); }
  const std::vector<NodeId>& fiber(NodeId t) const { return fibers_.at(t); }
  NodeId top(NodeId t) const { return tops_.at(t); }
  bool is_collapsed(NodeId v) const { return collapsed_.at(v) != 0; }
  std::vector<NodeId> collapsed_nodes() const;
  const std::vector<NodeId>& node_map() const noexcept { return map_; }

 private:
  TreeMorphism() = default;

  TreePtr source_;
  TreePtr target_;
  std::vector<NodeId> map_;
  std::vector<std::vector<NodeId>> fibers_;
  std::vector<NodeId> tops_;
  std::vector<char> collapsed_;
};

// second after first. Throws Error(kTreeMismatch).
TreeMorphism compose(const TreeMorphism& second, const TreeMorphism& first);

MeasureState push_measure(const TreeMorphism& pi, const MeasureState& mu);
EndCharge push_charge(const TreeMorphism& pi, const EndCharge& a);
// Throws Error(kNotLiftable) when a move touches a collapsed node.
MoveWord push_word(const TreeMorphism& pi, const MoveWord& w);
Region preimage(const TreeMorphism& pi, const Region& region);

// Right inverses of the pushforwards: fiber mass is split evenly.
MeasureState pull_measure(const TreeMorphism& pi, const MeasureState& nu);
EndCharge pull_charge(const TreeMorphism& pi, const EndCharge& a);

// The pushed word has the pushed charge and its final state is the pushed
// final state.
bool check_diagram(const TreeMorphism& pi, const MoveWord& w);

// Builds the section upstairs with collapsed nodes frozen and pushes it down.
MoveWord lift_section(const TreeMorphism& pi, const MeasureState& nu, const EndCharge& a,
                      const std::optional<Exhaustion>& source_ex = std::nullopt);

}  // namespace endcharge
