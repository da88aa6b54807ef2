#include "endcharge/proper_morphism.hpp"

#include "endcharge/errors.hpp"

namespace endcharge {

namespace {

[[noreturn]] void invalid(const std::string& message) { throw Error(ErrorCode::kInvalidMorphism, message); }

}  // namespace

TreeMorphism TreeMorphism::make(TreePtr source, TreePtr target, std::vector<NodeId> node_map) {
  const BalloonTree& s = *source;
  const BalloonTree& t = *target;
  if (node_map.size() != s.size()) {
    invalid("map must cover every source node");
  }
  TreeMorphism pi;
  pi.fibers_.assign(t.size(), {});
  for (NodeId v : s.preorder()) {
    if (node_map[v] >= t.size()) {
      invalid("image of " + s.name(v) + " is outside the target");
    }
    pi.fibers_[node_map[v]].push_back(v);
  }
  if (node_map[s.root()] != t.root()) {
    invalid("root must map to root");
  }
  pi.tops_.assign(t.size(), 0);
  pi.collapsed_.assign(s.size(), 0);
  for (NodeId x = 0; x < t.size(); ++x) {
    const auto& fib = pi.fibers_[x];
    if (fib.empty()) {
      invalid("target node " + t.name(x) + " is not hit");
    }
    if (t.is_end(x) != s.is_end(fib.front()) || (t.is_end(x) && fib.size() != 1)) {
      invalid("End leaves must correspond one to one at " + t.name(x));
    }
    std::size_t tops = 0;
    for (NodeId v : fib) {
      const auto p = s.parent(v);
      if (!p || node_map[*p] != x) {
        ++tops;
        pi.tops_[x] = v;
      } else {
        pi.collapsed_[v] = 1;
      }
    }
    if (tops != 1) {
      invalid("fiber over " + t.name(x) + " is not connected");
    }
    const NodeId top = pi.tops_[x];
    for (NodeId v : fib) {
      if (v == top) {
        continue;
      }
      for (NodeId c : s.children(v)) {
        if (node_map[c] != x) {
          invalid("collapsed node " + s.name(v) + " has a child outside its fiber");
        }
      }
    }
    const auto sp = s.parent(top);
    const auto tp = t.parent(x);
    if (sp.has_value() != tp.has_value() || (sp && node_map[*sp] != *tp)) {
      invalid("map does not preserve the edge above " + s.name(top));
    }
  }
  pi.source_ = std::move(source);
  pi.target_ = std::move(target);
  pi.map_ = std::move(node_map);
  return pi;
}

TreeMorphism TreeMorphism::from_names(TreePtr source, TreePtr target, const std::map<std::string, std::string>& map) {
  std::vector<NodeId> ids(source->size());
  for (NodeId v = 0; v < source->size(); ++v) {
    const auto it = map.find(source->name(v));
    if (it == map.end()) {
      invalid("source node " + source->name(v) + " is not mapped");
    }
    const auto img = target->find(it->second);
    if (!img) {
      invalid("unknown target node " + it->second);
    }
    ids[v] = *img;
  }
  if (map.size() != source->size()) {
    invalid("map names nodes outside the source");
  }
  return make(std::move(source), std::move(target), std::move(ids));
}

TreeMorphism TreeMorphism::identity(TreePtr tree) {
  std::vector<NodeId> ids(tree->size());
  for (NodeId v = 0; v < ids.size(); ++v) {
    ids[v] = v;
  }
  return make(tree, tree, std::move(ids));
}

std::vector<NodeId> TreeMorphism::collapsed_nodes() const {
  std::vector<NodeId> out;
  for (NodeId v : source_->preorder()) {
    if (collapsed_[v]) {
      out.push_back(v);
    }
  }
  return out;
}

TreeMorphism compose(const TreeMorphism& second, const TreeMorphism& first) {
  require_same_tree(first.target(), second.source(), "composed morphisms");
  std::vector<NodeId> ids(first.source()->size());
  for (NodeId v = 0; v < ids.size(); ++v) {
    ids[v] = second.image(first.image(v));
  }
  return TreeMorphism::make(first.source(), second.target(), std::move(ids));
}

MeasureState push_measure(const TreeMorphism& pi, const MeasureState& mu) {
  require_same_tree(pi.source(), mu.tree(), "morphism source and measure");
  const BalloonTree& t = *pi.target();
  std::vector<Rational> blocks(t.size());
  std::vector<ExtendedMass> tails(t.size());
  for (NodeId x = 0; x < t.size(); ++x) {
    if (t.is_end(x)) {
      tails[x] = mu.tail(pi.top(x));
    } else {
      for (NodeId v : pi.fiber(x)) {
        blocks[x] += mu.block(v);
      }
    }
  }
  return MeasureState(pi.target(), std::move(blocks), std::move(tails));
}

EndCharge push_charge(const TreeMorphism& pi, const EndCharge& a) {
  require_same_tree(pi.source(), a.tree(), "morphism source and charge");
  EndCharge out = EndCharge::zero(pi.target());
  for (NodeId leaf : pi.target()->end_leaves()) {
    out.set(leaf, a.value(pi.top(leaf)));
  }
  return out;
}

MoveWord push_word(const TreeMorphism& pi, const MoveWord& w) {
  require_same_tree(pi.source(), w.tree(), "morphism source and word");
  const BalloonTree& s = *pi.source();
  MoveWord out = MoveWord::empty(push_measure(pi, w.base));
  for (std::size_t i = 0; i < w.moves.size(); ++i) {
    const Move& m = w.moves[i];
    if (const auto* b = std::get_if<BalloonMove>(&m)) {
      if (b->child >= s.size() || pi.is_collapsed(b->child)) {
        throw WordError(ErrorCode::kNotLiftable, i + 1, "move crosses an edge inside a collapsed fiber");
      }
      out.moves.push_back(BalloonMove{pi.image(b->parent), pi.image(b->child), b->amount});
      continue;
    }
    const auto& r = std::get<Rearrange>(m);
    Rearrange image;
    for (std::size_t j = 0; j < r.support.size(); ++j) {
      const NodeId v = r.support[j];
      if (v >= s.size() || pi.is_collapsed(v)) {
        throw WordError(ErrorCode::kNotLiftable, i + 1, "rearrangement touches a collapsed node");
      }
      Rational total = r.masses.at(j);
      for (NodeId u : pi.fiber(pi.image(v))) {
        if (u != v) {
          total += w.base.block(u);
        }
      }
      image.support.push_back(pi.image(v));
      image.masses.push_back(total);
    }
    out.moves.push_back(std::move(image));
  }
  return out;
}

Region preimage(const TreeMorphism& pi, const Region& region) {
  require_same_tree(pi.target(), region.tree(), "morphism target and region");
  std::vector<NodeId> nodes;
  for (NodeId v = 0; v < pi.source()->size(); ++v) {
    if (region.contains(pi.image(v))) {
      nodes.push_back(v);
    }
  }
  return Region(pi.source(), nodes);
}

MeasureState pull_measure(const TreeMorphism& pi, const MeasureState& nu) {
  require_same_tree(pi.target(), nu.tree(), "morphism target and measure");
  const BalloonTree& s = *pi.source();
  std::vector<Rational> blocks(s.size());
  std::vector<ExtendedMass> tails(s.size());
  for (NodeId v = 0; v < s.size(); ++v) {
    const NodeId x = pi.image(v);
    if (s.is_end(v)) {
      tails[v] = nu.tail(x);
    } else {
      blocks[v] = nu.block(x) / static_cast<unsigned long>(pi.fiber(x).size());
    }
  }
  return MeasureState(pi.source(), std::move(blocks), std::move(tails));
}

EndCharge pull_charge(const TreeMorphism& pi, const EndCharge& a) {
  require_same_tree(pi.target(), a.tree(), "morphism target and charge");
  EndCharge out = EndCharge::zero(pi.source());
  for (NodeId leaf : pi.target()->end_leaves()) {
    out.set(pi.top(leaf), a.value(leaf));
  }
  return out;
}

bool check_diagram(const TreeMorphism& pi, const MoveWord& w) {
  const MoveWord pushed = push_word(pi, w);
  const TransportState up = apply_word(w);
  const TransportState down = apply_word(pushed);
  if (!(down.measure == push_measure(pi, up.measure))) {
    return false;
  }
  return charge_of_word(pushed) == push_charge(pi, charge_of_word(w));
}

MoveWord lift_section(const TreeMorphism& pi, const MeasureState& nu, const EndCharge& a,
                      const std::optional<Exhaustion>& source_ex) {
  const MeasureState mu = pull_measure(pi, nu);
  if (!validate_charge(nu, a)) {
    throw Error(ErrorCode::kInvalidCharge, "charge must have zero total and vanish on finite tails");
  }
  SectionOptions options;
  options.frozen = pi.collapsed_nodes();
  return push_word(pi, build_section(mu, pull_charge(pi, a), source_ex, options));
}

}  // namespace endcharge
