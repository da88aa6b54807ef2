#include "endcharge/transport.hpp"

#include <algorithm>
#include <utility>

#include "endcharge/errors.hpp"

namespace endcharge {

FluxField::FluxField(TreePtr tree) : tree_(std::move(tree)), values_(tree_->size()) {}

FluxField FluxField::zero(TreePtr tree) { return FluxField(std::move(tree)); }

const Rational& FluxField::at(NodeId child) const {
  if (child >= values_.size() || child == tree_->root()) {
    throw Error(ErrorCode::kBadEdge, "no edge leads into node " + std::to_string(child));
  }
  return values_[child];
}

void FluxField::add(NodeId child, const Rational& amount) {
  if (child >= values_.size() || child == tree_->root()) {
    throw Error(ErrorCode::kBadEdge, "no edge leads into node " + std::to_string(child));
  }
  values_[child] += amount;
}

Rational FluxField::divergence(NodeId v) const {
  Rational d = v == tree_->root() ? Rational(0) : values_.at(v);
  for (NodeId c : tree_->children(v)) {
    d -= values_[c];
  }
  return d;
}

bool FluxField::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](const Rational& q) { return q == 0; });
}

bool operator==(const FluxField& lhs, const FluxField& rhs) {
  return same_tree(lhs.tree_, rhs.tree_) && lhs.values_ == rhs.values_;
}

namespace {

void apply_balloon(const BalloonTree& tree, MeasureState& sigma, FluxField& flux, const BalloonMove& m) {
  if (m.parent >= tree.size() || m.child >= tree.size() || tree.parent(m.child) != m.parent) {
    throw Error(ErrorCode::kBadEdge, "balloon move on a non-edge");
  }
  sigma.set_block(m.parent, sigma.block(m.parent) - m.amount);
  if (tree.is_end(m.child)) {
    const ExtendedMass& tail = sigma.tail(m.child);
    if (tail.is_finite()) {
      const Rational next = tail.value() + m.amount;
      if (next <= 0) {
        throw Error(ErrorCode::kNonPositiveBlock,
                    "tail " + tree.name(m.child) + " would hold " + format_rational(next));
      }
      sigma.set_tail(m.child, ExtendedMass(next));
    }
  } else {
    sigma.set_block(m.child, sigma.block(m.child) + m.amount);
  }
  flux.add(m.child, m.amount);
}

void apply_rearrange(const BalloonTree& tree, MeasureState& sigma, FluxField& flux, const Rearrange& m) {
  if (m.support.empty() || m.support.size() != m.masses.size()) {
    throw Error(ErrorCode::kBadSupport, "support and masses must be nonempty and aligned");
  }
  std::vector<char> in_support(tree.size(), 0);
  for (NodeId v : m.support) {
    if (v >= tree.size() || in_support[v]) {
      throw Error(ErrorCode::kBadSupport, "support repeats or leaves the tree");
    }
    if (tree.is_end(v)) {
      throw Error(ErrorCode::kBadSupport, "support touches the tail " + tree.name(v));
    }
    in_support[v] = 1;
  }
  std::size_t tops = 0;
  for (NodeId v : m.support) {
    const auto p = tree.parent(v);
    if (!p || !in_support[*p]) {
      ++tops;
    }
  }
  if (tops != 1) {
    throw Error(ErrorCode::kBadSupport, "support is not connected");
  }
  Rational before = 0;
  Rational after = 0;
  std::vector<Rational> delta(tree.size());
  for (std::size_t i = 0; i < m.support.size(); ++i) {
    if (m.masses[i] <= 0) {
      throw Error(ErrorCode::kNonPositiveBlock, "rearranged mass at " + tree.name(m.support[i]) + " is not positive");
    }
    before += sigma.block(m.support[i]);
    after += m.masses[i];
    delta[m.support[i]] = m.masses[i] - sigma.block(m.support[i]);
  }
  if (before != after) {
    throw Error(ErrorCode::kMassNotConserved,
                "support holds " + format_rational(before) + " but new masses sum to " + format_rational(after));
  }
  // Each internal edge carries the total change of the support below it.
  const auto& order = tree.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId v = *it;
    if (!in_support[v]) {
      continue;
    }
    const auto p = tree.parent(v);
    if (p && in_support[*p]) {
      flux.add(v, delta[v]);
      delta[*p] += delta[v];
    }
  }
  for (std::size_t i = 0; i < m.support.size(); ++i) {
    sigma.set_block(m.support[i], m.masses[i]);
  }
}

}  // namespace

TransportState apply_move(const MeasureState& sigma, const FluxField& flux, const Move& move) {
  require_same_tree(sigma.tree(), flux.tree(), "measure and flux");
  TransportState out{sigma, flux};
  const BalloonTree& tree = *sigma.tree();
  if (const auto* b = std::get_if<BalloonMove>(&move)) {
    apply_balloon(tree, out.measure, out.flux, *b);
  } else {
    apply_rearrange(tree, out.measure, out.flux, std::get<Rearrange>(move));
  }
  return out;
}

TransportState apply_word(const MoveWord& word) {
  TransportState state{word.base, FluxField::zero(word.tree())};
  for (std::size_t i = 0; i < word.moves.size(); ++i) {
    try {
      state = apply_move(state.measure, state.flux, word.moves[i]);
    } catch (const WordError&) {
      throw;
    } catch (const Error& e) {
      throw WordError(e.code(), i + 1, e.detail());
    }
  }
  return state;
}

bool is_measure_preserving(const TransportState& final_state, const MeasureState& base) {
  const BalloonTree& tree = *base.tree();
  for (NodeId v : tree.blocks()) {
    if (final_state.measure.block(v) != base.block(v)) {
      return false;
    }
  }
  for (NodeId leaf : tree.end_leaves()) {
    if (base.tail(leaf).is_finite() && final_state.flux.at(leaf) != 0) {
      return false;
    }
  }
  return true;
}

bool is_measure_preserving(const MoveWord& word) { return is_measure_preserving(apply_word(word), word.base); }

EndCharge charge_of_flux(const TransportState& final_state, const MeasureState& base) {
  if (!is_measure_preserving(final_state, base)) {
    throw Error(ErrorCode::kCNotDefined, "the word is not measure-preserving");
  }
  EndCharge c = EndCharge::zero(base.tree());
  for (NodeId leaf : base.tree()->end_leaves()) {
    c.set(leaf, final_state.flux.at(leaf));
  }
  return c;
}

EndCharge charge_of_word(const MoveWord& word) { return charge_of_flux(apply_word(word), word.base); }

MoveWord invert_word(const MoveWord& word) {
  std::vector<Move> inverse;
  inverse.reserve(word.moves.size());
  TransportState state{word.base, FluxField::zero(word.tree())};
  for (std::size_t i = 0; i < word.moves.size(); ++i) {
    const Move& m = word.moves[i];
    if (const auto* b = std::get_if<BalloonMove>(&m)) {
      inverse.push_back(BalloonMove{b->parent, b->child, -b->amount});
    } else {
      const auto& r = std::get<Rearrange>(m);
      Rearrange back{r.support, {}};
      for (NodeId v : r.support) {
        back.masses.push_back(state.measure.block(v));
      }
      inverse.push_back(std::move(back));
    }
    try {
      state = apply_move(state.measure, state.flux, m);
    } catch (const Error& e) {
      throw WordError(e.code(), i + 1, e.detail());
    }
  }
  std::reverse(inverse.begin(), inverse.end());
  return MoveWord{std::move(inverse), state.measure};
}

MoveWord concat(const MoveWord& first, const MoveWord& second) {
  require_same_tree(first.tree(), second.tree(), "words");
  MoveWord out = first;
  out.moves.insert(out.moves.end(), second.moves.begin(), second.moves.end());
  return out;
}

Rational region_transfer(const FluxField& flux, const Region& region) {
  require_same_tree(flux.tree(), region.tree(), "flux and region");
  const BalloonTree& tree = *flux.tree();
  Rational total = 0;
  for (NodeId v = 0; v < tree.size(); ++v) {
    const auto p = tree.parent(v);
    if (!p) {
      continue;
    }
    const bool inside_child = region.contains(v);
    const bool inside_parent = region.contains(*p);
    if (inside_child && !inside_parent) {
      total += flux.at(v);
    } else if (inside_parent && !inside_child) {
      total -= flux.at(v);
    }
  }
  return total;
}

Rational region_transfer(const MoveWord& word, const Region& region) {
  return region_transfer(apply_word(word).flux, region);
}

bool extensionally_equal(const MoveWord& lhs, const MoveWord& rhs) {
  const TransportState a = apply_word(lhs);
  const TransportState b = apply_word(rhs);
  return a.measure == b.measure && a.flux == b.flux;
}

}  // namespace endcharge
