#include "endcharge/random_instances.hpp"

#include <algorithm>
#include <string>

namespace endcharge {

std::uint64_t draw(Rng& rng, std::uint64_t lo, std::uint64_t hi) { return lo + rng() % (hi - lo + 1); }

bool coin(Rng& rng, unsigned percent) { return draw(rng, 0, 99) < percent; }

Rational draw_positive(Rng& rng) {
  Rational q(static_cast<long>(draw(rng, 1, 12)), static_cast<long>(draw(rng, 1, 6)));
  q.canonicalize();
  return q;
}

namespace {

Rational fraction_of(Rng& rng, const Rational& whole) {
  Rational r(static_cast<long>(draw(rng, 1, 4)), 5L);
  r.canonicalize();
  return whole * r;
}

}  // namespace

TreePtr random_tree(Rng& rng, const TreeShape& shape) {
  struct Draft {
    std::size_t depth;
    std::vector<std::size_t> children;
  };
  std::vector<Draft> nodes{{0, {}}};
  const std::size_t budget = std::max<std::size_t>(3, draw(rng, 3, shape.max_nodes));
  for (std::size_t i = 0; i < nodes.size() && nodes.size() < budget; ++i) {
    if (nodes[i].depth >= shape.max_depth) {
      continue;
    }
    const std::size_t lo = i == 0 ? 1 : 0;
    std::size_t kids = draw(rng, lo, shape.max_children);
    kids = std::min(kids, budget - nodes.size());
    for (std::size_t k = 0; k < kids; ++k) {
      nodes[i].children.push_back(nodes.size());
      nodes.push_back({nodes[i].depth + 1, {}});
    }
  }
  std::vector<NodeSpec> specs(nodes.size());
  std::vector<std::size_t> leaves;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    NodeSpec& spec = specs[i];
    spec.id = "n" + std::to_string(i);
    for (std::size_t c : nodes[i].children) {
      spec.children.push_back("n" + std::to_string(c));
    }
    if (i != 0 && nodes[i].children.empty()) {
      leaves.push_back(i);
    }
  }
  bool any_end = false;
  for (std::size_t i : leaves) {
    if (coin(rng, 70)) {
      specs[i].leaf = LeafKind::kEnd;
      any_end = true;
    } else {
      specs[i].leaf = LeafKind::kClosed;
    }
  }
  if (!any_end) {
    specs[leaves.back()].leaf = LeafKind::kEnd;
  }
  for (NodeSpec& spec : specs) {
    if (spec.leaf == LeafKind::kEnd) {
      spec.tail = coin(rng, shape.infinite_percent) ? ExtendedMass::infinity() : ExtendedMass(draw_positive(rng));
    } else {
      spec.weight = draw_positive(rng);
    }
  }
  return BalloonTree::make(std::move(specs), "n0");
}

MeasureState random_measure(Rng& rng, const TreePtr& tree) {
  std::vector<Rational> blocks(tree->size());
  std::vector<ExtendedMass> tails(tree->size());
  for (NodeId v = 0; v < tree->size(); ++v) {
    if (!tree->is_end(v)) {
      blocks[v] = draw_positive(rng);
    } else if (tree->tail(v).is_infinite()) {
      tails[v] = ExtendedMass::infinity();
    } else {
      tails[v] = draw_positive(rng);
    }
  }
  return MeasureState(tree, std::move(blocks), std::move(tails));
}

EndCharge random_charge(Rng& rng, const MeasureState& mu) {
  EndCharge a = EndCharge::zero(mu.tree());
  std::vector<NodeId> open;
  for (NodeId leaf : mu.tree()->end_leaves()) {
    if (mu.tail(leaf).is_infinite()) {
      open.push_back(leaf);
    }
  }
  if (open.size() < 2) {
    return a;
  }
  Rational total = 0;
  for (std::size_t i = 0; i + 1 < open.size(); ++i) {
    if (coin(rng, 15)) {
      continue;
    }
    Rational v = draw_positive(rng);
    if (coin(rng, 50)) {
      v = -v;
    }
    a.set(open[i], v);
    total += v;
  }
  a.set(open.back(), -total);
  return a;
}

MoveWord random_preserving_word(Rng& rng, const MeasureState& mu, std::size_t moves,
                                const std::vector<NodeId>& frozen) {
  const TreePtr& tp = mu.tree();
  const BalloonTree& tree = *tp;
  std::vector<char> still(tree.size(), 0);
  for (NodeId v : frozen) {
    still[v] = 1;
  }
  std::vector<NodeId> movable;
  for (NodeId v : tree.preorder()) {
    if (tree.parent(v) && !still[v]) {
      movable.push_back(v);
    }
  }
  MoveWord w = MoveWord::empty(mu);
  TransportState state{mu, FluxField::zero(tp)};
  auto push = [&](Move m) {
    state = apply_move(state.measure, state.flux, m);
    w.moves.push_back(std::move(m));
  };
  if (movable.empty()) {
    return w;
  }

  for (std::size_t i = 0; i < moves; ++i) {
    const NodeId c = movable[draw(rng, 0, movable.size() - 1)];
    const NodeId p = *tree.parent(c);
    if (coin(rng, 20) && !tree.is_end(c)) {
      // Shuffle mass between a block and its parent.
      const Rational both = state.measure.block(p) + state.measure.block(c);
      const Rational first = fraction_of(rng, both);
      push(Rearrange{{p, c}, {first, both - first}});
      continue;
    }
    const ExtendedMass child = state.measure.node_mass(c);
    if (coin(rng, 50)) {
      push(BalloonMove{p, c, fraction_of(rng, state.measure.block(p))});
    } else {
      const Rational amount = child.is_infinite() ? draw_positive(rng) : fraction_of(rng, child.value());
      push(BalloonMove{p, c, -amount});
    }
  }

  // Close up: pull surplus back out of finite tails, balance the blocks
  // against an infinite tail if there is one, then refill the finite tails.
  std::vector<std::pair<NodeId, Rational>> refills;
  std::optional<NodeId> reservoir;
  for (NodeId leaf : tree.end_leaves()) {
    const NodeId p = *tree.parent(leaf);
    if (still[p]) {
      continue;
    }
    if (mu.tail(leaf).is_infinite()) {
      if (!reservoir) {
        reservoir = leaf;
      }
      continue;
    }
    const Rational f = state.flux.at(leaf);
    if (f > 0) {
      push(BalloonMove{p, leaf, -f});
    } else if (f < 0) {
      refills.emplace_back(leaf, -f);
    }
  }
  std::vector<Rational> want(tree.size());
  Rational have = 0;
  Rational need = 0;
  for (NodeId v : tree.blocks()) {
    if (!still[v]) {
      want[v] = mu.block(v);
      have += state.measure.block(v);
    }
  }
  for (const auto& [leaf, amount] : refills) {
    want[*tree.parent(leaf)] += amount;
  }
  for (NodeId v : tree.blocks()) {
    need += still[v] ? Rational(0) : want[v];
  }
  const Rational excess = have - need;
  if (excess != 0) {
    // Without an infinite tail the blocks balance exactly.
    const NodeId p = *tree.parent(*reservoir);
    if (excess < 0) {
      push(BalloonMove{p, *reservoir, excess});
    } else {
      want[p] += excess;
    }
  }
  Rearrange settle;
  for (NodeId v : tree.preorder()) {
    if (!tree.is_end(v) && !still[v]) {
      settle.support.push_back(v);
      settle.masses.push_back(want[v]);
    }
  }
  push(std::move(settle));
  if (excess > 0) {
    push(BalloonMove{*tree.parent(*reservoir), *reservoir, excess});
  }
  for (const auto& [leaf, amount] : refills) {
    push(BalloonMove{*tree.parent(leaf), leaf, amount});
  }
  return w;
}

Region random_region(Rng& rng, const TreePtr& tree, unsigned end_percent) {
  std::vector<NodeId> nodes;
  for (NodeId v = 0; v < tree->size(); ++v) {
    if (coin(rng, tree->is_end(v) ? end_percent : 50)) {
      nodes.push_back(v);
    }
  }
  return Region(tree, nodes);
}

RayStar random_star(Rng& rng, std::size_t max_rays, std::size_t max_depth) {
  const std::size_t rays = draw(rng, 2, std::max<std::size_t>(2, max_rays));
  std::vector<std::vector<Rational>> cells(rays);
  std::vector<ExtendedMass> tails(rays);
  for (std::size_t i = 0; i < rays; ++i) {
    const std::size_t depth = draw(rng, 0, max_depth);
    for (std::size_t k = 0; k < depth; ++k) {
      cells[i].push_back(draw_positive(rng));
    }
    tails[i] = coin(rng, 65) ? ExtendedMass::infinity() : ExtendedMass(draw_positive(rng));
  }
  return RayStar::make(draw_positive(rng), cells, tails);
}

TreeMorphism random_morphism(Rng& rng, const TreePtr& target) {
  std::vector<NodeSpec> specs = target->specs();
  std::vector<std::string> images;
  for (const NodeSpec& s : specs) {
    images.push_back(s.id);
  }
  const std::size_t original = specs.size();
  for (std::size_t i = 0; i < original; ++i) {
    if (specs[i].leaf == LeafKind::kEnd || !coin(rng, 35)) {
      continue;
    }
    const std::size_t length = draw(rng, 1, 2);
    std::size_t attach = i;
    for (std::size_t k = 0; k < length; ++k) {
      const std::string id = specs[i].id + "~" + std::to_string(specs.size());
      specs[attach].children.push_back(id);
      if (specs[attach].leaf == LeafKind::kClosed) {
        specs[attach].leaf = LeafKind::kInterior;
      }
      specs.push_back(NodeSpec{id, draw_positive(rng), {}, LeafKind::kClosed, {}});
      images.push_back(specs[i].id);
      attach = specs.size() - 1;
      if (k + 1 < length) {
        specs[attach].leaf = LeafKind::kInterior;
      }
    }
  }
  TreePtr source = BalloonTree::make(std::move(specs), target->name(target->root()));
  std::vector<NodeId> map(source->size());
  for (NodeId v = 0; v < source->size(); ++v) {
    map[v] = target->id(images[v]);
  }
  return TreeMorphism::make(source, target, std::move(map));
}

Refinement refine(const MeasureState& mu, std::size_t levels) {
  if (levels == 0) {
    return Refinement{mu, mu};
  }
  const BalloonTree& tree = *mu.tree();
  std::vector<NodeSpec> specs = tree.specs();
  for (NodeId v = 0; v < tree.size(); ++v) {
    if (tree.is_end(v)) {
      specs[v].tail = mu.tail(v);
    } else {
      specs[v].weight = mu.block(v);
    }
  }
  for (NodeId leaf : tree.end_leaves()) {
    const ExtendedMass& tail = mu.tail(leaf);
    // Each new block takes 1/(2 levels) of a finite tail; the End leaf keeps half.
    Rational piece = tail.is_infinite() ? Rational(1) : Rational(tail.value() / static_cast<long>(2 * levels));
    const NodeId p = *tree.parent(leaf);
    std::size_t above = p;
    for (std::size_t k = 0; k < levels; ++k) {
      const std::string id = tree.name(leaf) + "^" + std::to_string(k);
      if (k == 0) {
        std::replace(specs[p].children.begin(), specs[p].children.end(), tree.name(leaf), id);
      } else {
        specs[above].children.push_back(id);
      }
      specs.push_back(NodeSpec{id, piece, {}, LeafKind::kInterior, {}});
      above = specs.size() - 1;
    }
    specs[above].children.push_back(tree.name(leaf));
    if (tail.is_finite()) {
      specs[leaf].tail = ExtendedMass(Rational(tail.value() - piece * static_cast<long>(levels)));
    }
  }
  TreePtr fine = BalloonTree::make(std::move(specs), tree.name(tree.root()));
  return Refinement{mu, MeasureState::declared(fine)};
}

EndCharge transfer_charge(const EndCharge& a, const TreePtr& onto) {
  EndCharge out = EndCharge::zero(onto);
  for (NodeId leaf : a.tree()->end_leaves()) {
    out.set(onto->id(a.tree()->name(leaf)), a.value(leaf));
  }
  return out;
}

}  // namespace endcharge
