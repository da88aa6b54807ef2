#include "endcharge/section.hpp"

#include <algorithm>
#include <deque>

#include "endcharge/errors.hpp"

namespace endcharge {

namespace {

bool ancestor_closed(const Region& region) {
  const BalloonTree& tree = *region.tree();
  for (NodeId v : region.nodes()) {
    const auto p = tree.parent(v);
    if (p && !region.contains(*p)) {
      return false;
    }
  }
  return true;
}

// Roots of the components of the complement of an ancestor-closed region.
std::vector<NodeId> complement_tops(const Region& region) {
  const BalloonTree& tree = *region.tree();
  std::vector<NodeId> tops;
  for (NodeId v : tree.preorder()) {
    if (region.contains(v)) {
      continue;
    }
    const auto p = tree.parent(v);
    if (!p || region.contains(*p)) {
      tops.push_back(v);
    }
  }
  return tops;
}

Rational ends_charge(const BalloonTree& tree, const EndCharge& a, NodeId top) {
  Rational total = 0;
  for (NodeId leaf : tree.subtree_ends(top)) {
    total += a.value(leaf);
  }
  return total;
}

void check_decomposition(const Region& region, const char* what) {
  if (!region.is_compact() || !ancestor_closed(region)) {
    throw Error(ErrorCode::kBadDecomposition, std::string(what) + " must be compact and ancestor-closed");
  }
}

class Scheduler {
 public:
  Scheduler(TransportState start, const std::vector<char>& frozen, MoveWord& out)
      : state_(std::move(start)), frozen_(frozen), out_(out) {}

  const TransportState& state() const { return state_; }

  void push(Move move) {
    state_ = apply_move(state_.measure, state_.flux, move);
    out_.moves.push_back(std::move(move));
  }

  // Gathers amount > 0 at the gateway from the donor nodes, leaving every
  // donor with positive mass. Nearer donors are drained first when an
  // infinite tail is available; otherwise each gives in proportion to its
  // mass.
  void gather(const std::vector<char>& donors, NodeId gateway, const Rational& amount) {
    const BalloonTree& tree = *state_.measure.tree();
    std::vector<NodeId> order{gateway};
    std::vector<NodeId> via(tree.size(), gateway);
    std::vector<char> seen(tree.size(), 0);
    seen[gateway] = 1;
    for (std::size_t i = 0; i < order.size(); ++i) {
      const NodeId v = order[i];
      std::vector<NodeId> next = tree.children(v);
      if (const auto p = tree.parent(v)) {
        next.insert(next.begin(), *p);
      }
      for (NodeId u : next) {
        if (donors[u] && !seen[u]) {
          seen[u] = 1;
          via[u] = v;
          order.push_back(u);
        }
      }
    }

    std::vector<Rational> give(tree.size());
    std::optional<NodeId> reservoir;
    Rational finite_total = 0;
    for (NodeId v : order) {
      const ExtendedMass m = state_.measure.node_mass(v);
      if (m.is_infinite()) {
        if (!reservoir) {
          reservoir = v;
        }
      } else {
        finite_total += m.value();
      }
    }
    if (reservoir) {
      Rational remaining = amount;
      for (NodeId v : order) {
        const ExtendedMass m = state_.measure.node_mass(v);
        if (remaining == 0) {
          break;
        }
        if (m.is_finite()) {
          const Rational half = m.value() / 2;
          give[v] = std::min(remaining, half);
          remaining -= give[v];
        }
      }
      give[*reservoir] += remaining;
    } else {
      for (NodeId v : order) {
        give[v] = amount * state_.measure.node_mass(v).value() / finite_total;
      }
    }

    std::vector<Rational> carry(tree.size());
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const NodeId v = *it;
      if (v == gateway) {
        continue;
      }
      carry[v] += give[v];
      const NodeId u = via[v];
      if (carry[v] != 0) {
        if (tree.parent(v) == u) {
          push(BalloonMove{u, v, -carry[v]});
        } else {
          push(BalloonMove{v, u, carry[v]});
        }
      }
      carry[u] += carry[v];
    }
  }

  std::vector<char> active_subtree(NodeId top) const {
    const BalloonTree& tree = *state_.measure.tree();
    std::vector<char> members(tree.size(), 0);
    for (NodeId v : tree.subtree(top)) {
      members[v] = frozen_[v] ? 0 : 1;
    }
    return members;
  }

 private:
  TransportState state_;
  const std::vector<char>& frozen_;
  MoveWord& out_;
};

Region region_of(const TreePtr& tree, const std::vector<char>& members) {
  std::vector<NodeId> nodes;
  for (NodeId v = 0; v < members.size(); ++v) {
    if (members[v]) {
      nodes.push_back(v);
    }
  }
  return Region(tree, nodes);
}

}  // namespace

Exhaustion Exhaustion::depth_cuts(const TreePtr& tree) {
  Exhaustion ex;
  const std::size_t top = tree->max_depth() + 1;
  for (std::size_t d = 1; d <= top; ++d) {
    std::vector<NodeId> nodes;
    for (NodeId v : tree->preorder()) {
      if (!tree->is_end(v) && tree->depth(v) < d) {
        nodes.push_back(v);
      }
    }
    ex.levels.emplace_back(tree, nodes);
  }
  return ex;
}

void validate_exhaustion(const Exhaustion& ex, const TreePtr& tree) {
  if (ex.levels.empty()) {
    throw Error(ErrorCode::kBadDecomposition, "exhaustion has no levels");
  }
  const Region* prev = nullptr;
  for (const Region& level : ex.levels) {
    if (!same_tree(level.tree(), tree)) {
      throw Error(ErrorCode::kBadDecomposition, "exhaustion level lives on another tree");
    }
    check_decomposition(level, "exhaustion level");
    if (prev && !((*prev - level).is_empty())) {
      throw Error(ErrorCode::kBadDecomposition, "exhaustion levels are not nested");
    }
    prev = &level;
  }
  for (NodeId v : tree->blocks()) {
    if (!prev->contains(v)) {
      throw Error(ErrorCode::kBadDecomposition, "last exhaustion level misses block " + tree->name(v));
    }
  }
}

bool FeasibilityInterval::contains(const Rational& amount) const {
  if (amount >= 0) {
    return above.is_infinite() || amount < above.value();
  }
  return below.is_infinite() || -amount < below.value();
}

std::string FeasibilityInterval::to_string() const {
  const std::string low = below.is_infinite() ? "-inf" : format_rational(-below.value());
  const std::string high = above.is_infinite() ? "inf" : format_rational(above.value());
  return "(" + low + ", " + high + ")";
}

FluxField forced_flux(const MeasureState& mu, const EndCharge& a) {
  if (!validate_charge(mu, a)) {
    throw Error(ErrorCode::kInvalidCharge, "charge must have zero total and vanish on finite tails");
  }
  const BalloonTree& tree = *mu.tree();
  FluxField flux = FluxField::zero(mu.tree());
  std::vector<Rational> below(tree.size());
  const auto& order = tree.preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const NodeId v = *it;
    if (tree.is_end(v)) {
      below[v] = a.value(v);
    }
    if (const auto p = tree.parent(v)) {
      flux.add(v, below[v]);
      below[*p] += below[v];
    }
  }
  return flux;
}

FeasibilityInterval feasibility_interval(const MeasureState& sigma, const Region& balloon, const Region& rest) {
  if (!(balloon & rest).is_empty()) {
    throw Error(ErrorCode::kBadDecomposition, "balloon and complementary region overlap");
  }
  return FeasibilityInterval{mass(sigma, balloon), mass(sigma, rest)};
}

Rational gauge_transfer(const FeasibilityInterval& interval, const Rational& t) {
  if (t <= -1 || t >= 1) {
    throw Error(ErrorCode::kRange, "gauge parameter must lie in (-1, 1)");
  }
  if (t >= 0) {
    return interval.above.is_infinite() ? Rational(t / (1 - t)) : Rational(t * interval.above.value());
  }
  return interval.below.is_infinite() ? Rational(t / (1 + t)) : Rational(t * interval.below.value());
}

Rational gauge_parameter(const FeasibilityInterval& interval, const Rational& target) {
  if (!interval.contains(target)) {
    throw Error(ErrorCode::kInfeasibleTransfer,
                "transfer " + format_rational(target) + " outside " + interval.to_string());
  }
  if (target == 0) {
    return 0;
  }
  if (target > 0) {
    return interval.above.is_infinite() ? Rational(target / (1 + target)) : Rational(target / interval.above.value());
  }
  return interval.below.is_infinite() ? Rational(target / (1 - target)) : Rational(target / interval.below.value());
}

Rational solve_balloon_parameter(const MeasureState& sigma, const Region& balloon, const Region& rest,
                                 const Rational& target) {
  return gauge_parameter(feasibility_interval(sigma, balloon, rest), target);
}

MoveWord balance_step(const MeasureState& mu, const Region& inner, const Region& outer, const MoveWord& f,
                      const MoveWord& g, const EndCharge& a, const SectionOptions& options) {
  const TreePtr& tp = mu.tree();
  const BalloonTree& tree = *tp;
  require_same_tree(tp, inner.tree(), "measure and inner region");
  require_same_tree(tp, outer.tree(), "measure and outer region");
  require_same_tree(tp, f.tree(), "measure and f");
  require_same_tree(tp, g.tree(), "measure and g");
  require_same_tree(tp, a.tree(), "measure and charge");
  check_decomposition(inner, "inner region");
  check_decomposition(outer, "outer region");
  if (!(inner - outer).is_empty()) {
    throw Error(ErrorCode::kBadDecomposition, "inner region is not inside the outer region");
  }

  std::vector<char> frozen(tree.size(), 0);
  for (NodeId v : options.frozen) {
    if (v >= tree.size() || tree.is_end(v)) {
      throw Error(ErrorCode::kBadDecomposition, "frozen nodes must be blocks");
    }
    frozen[v] = 1;
  }
  for (NodeId v : options.frozen) {
    for (NodeId c : tree.children(v)) {
      if (!frozen[c]) {
        throw Error(ErrorCode::kBadDecomposition, "frozen set must contain the descendants of " + tree.name(v));
      }
    }
  }

  const TransportState sf = apply_word(f);
  const TransportState sg = apply_word(g);
  for (NodeId v : inner.nodes()) {
    if (sf.measure.block(v) != sg.measure.block(v)) {
      throw Error(ErrorCode::kPreconditionFailed, "f and g disagree at " + tree.name(v));
    }
  }
  for (NodeId v : options.frozen) {
    if (sf.measure.block(v) != sg.measure.block(v)) {
      throw Error(ErrorCode::kPreconditionFailed, "f and g disagree at frozen node " + tree.name(v));
    }
  }
  const std::vector<NodeId> tops = complement_tops(inner);
  if (inner.is_empty()) {
    if (ends_charge(tree, a, tree.root()) != 0) {
      throw Error(ErrorCode::kPreconditionFailed, "charge has nonzero total");
    }
  } else {
    for (NodeId x : tops) {
      if (sf.flux.at(x) - sg.flux.at(x) != ends_charge(tree, a, x)) {
        throw Error(ErrorCode::kPreconditionFailed, "transfer into the component at " + tree.name(x) +
                                                         " does not match the charge");
      }
    }
  }

  MoveWord h = MoveWord::empty(sf.measure);
  Scheduler run(sf, frozen, h);
  for (NodeId x : tops) {
    if (!outer.contains(x) || frozen[x]) {
      continue;
    }
    std::vector<char> core(tree.size(), 0);
    std::vector<std::pair<NodeId, NodeId>> balloons;
    for (NodeId v : tree.subtree(x)) {
      if (outer.contains(v)) {
        core[v] = frozen[v] ? 0 : 1;
      } else if (outer.contains(*tree.parent(v))) {
        balloons.emplace_back(*tree.parent(v), v);
      }
    }
    for (std::size_t k = 0; k < balloons.size(); ++k) {
      const auto [p, c] = balloons[k];
      const Rational already = run.state().flux.at(c) - sg.flux.at(c);
      const Rational target = ends_charge(tree, a, c) - already;
      if (target == 0) {
        continue;
      }
      const std::vector<char> inside = run.active_subtree(c);
      std::vector<char> rest = core;
      for (std::size_t j = k + 1; j < balloons.size(); ++j) {
        const std::vector<char> later = run.active_subtree(balloons[j].second);
        for (NodeId v = 0; v < tree.size(); ++v) {
          rest[v] = rest[v] || later[v];
        }
      }
      const FeasibilityInterval interval =
          feasibility_interval(run.state().measure, region_of(tp, inside), region_of(tp, rest));
      Rational t;
      try {
        t = gauge_parameter(interval, target);
      } catch (const Error& e) {
        throw Error(ErrorCode::kInfeasibleTransfer, "balloon at " + tree.name(c) + ": " + e.detail());
      }
      if (options.trace) {
        options.trace->push_back(TransferRecord{0, p, c, target, t});
      }
      if (target > 0) {
        run.gather(rest, p, target);
      } else {
        run.gather(inside, c, -target);
      }
      run.push(BalloonMove{p, c, target});
    }

    Rearrange settle;
    bool differs = false;
    for (NodeId v : tree.subtree(x)) {
      if (core[v]) {
        settle.support.push_back(v);
        settle.masses.push_back(sg.measure.block(v));
        differs = differs || run.state().measure.block(v) != sg.measure.block(v);
      }
    }
    if (differs) {
      run.push(std::move(settle));
    }
  }
  return h;
}

MoveWord build_section(const MeasureState& mu, const EndCharge& a, const std::optional<Exhaustion>& ex,
                       const SectionOptions& options) {
  require_same_tree(mu.tree(), a.tree(), "measure and charge");
  if (!validate_charge(mu, a)) {
    throw Error(ErrorCode::kInvalidCharge, "charge must have zero total and vanish on finite tails");
  }
  const Exhaustion levels = ex ? *ex : Exhaustion::depth_cuts(mu.tree());
  validate_exhaustion(levels, mu.tree());

  MoveWord f = MoveWord::empty(mu);
  MoveWord g = MoveWord::empty(mu);
  if (a.is_zero()) {
    return f;
  }
  const EndCharge minus_a = -a;
  Region prev = Region::empty(mu.tree());
  for (std::size_t i = 0; i < levels.levels.size(); ++i) {
    const Region& level = levels.levels[i];
    const std::size_t before = options.trace ? options.trace->size() : 0;
    if (i % 2 == 0) {
      f = concat(f, balance_step(mu, prev, level, f, g, a, options));
    } else {
      g = concat(g, balance_step(mu, prev, level, g, f, minus_a, options));
    }
    if (options.trace) {
      for (std::size_t j = before; j < options.trace->size(); ++j) {
        (*options.trace)[j].level = i + 1;
      }
    }
    prev = level;
  }
  return concat(f, invert_word(g));
}

Factorization factorize(const MoveWord& w) {
  EndCharge c = charge_of_word(w);
  MoveWord s = build_section(w.base, c);
  return Factorization{concat(w, invert_word(s)), std::move(c)};
}

MoveWord retract(const MoveWord& w, const Rational& tau) {
  if (tau < 0 || tau > 1) {
    throw Error(ErrorCode::kRange, "tau must lie in [0, 1]");
  }
  const EndCharge c = charge_of_word(w);
  const EndCharge scaled = linear_combine(tau, c, Rational(0), c);
  return concat(w, invert_word(build_section(w.base, scaled)));
}

}  // namespace endcharge
