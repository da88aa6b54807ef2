#include "endcharge/pl1d_oracle.hpp"

#include <algorithm>
#include <string>

#include "endcharge/errors.hpp"

namespace endcharge {

namespace {

bool below(const Rational& x, const std::optional<Rational>& hi) { return !hi || x < *hi; }

std::optional<Rational> min_hi(const std::optional<Rational>& a, const std::optional<Rational>& b) {
  if (!a) {
    return b;
  }
  if (!b) {
    return a;
  }
  return std::min(*a, *b);
}

std::optional<Rational> shifted(const std::optional<Rational>& hi, const Rational& by) {
  if (!hi) {
    return std::nullopt;
  }
  return Rational(*hi + by);
}

using Parts = std::vector<std::pair<Rational, Rational>>;

Parts merged(Parts parts) {
  std::sort(parts.begin(), parts.end());
  Parts out;
  for (auto& [lo, hi] : parts) {
    if (lo >= hi) {
      continue;
    }
    if (!out.empty() && lo <= out.back().second) {
      out.back().second = std::max(out.back().second, hi);
    } else {
      out.emplace_back(lo, hi);
    }
  }
  return out;
}

Parts minus(const Parts& a, const Parts& b) {
  Parts out;
  for (const auto& [lo, hi] : a) {
    Rational cursor = lo;
    for (const auto& [blo, bhi] : b) {
      if (bhi <= cursor || blo >= hi) {
        continue;
      }
      if (blo > cursor) {
        out.emplace_back(cursor, blo);
      }
      cursor = std::max(cursor, bhi);
    }
    if (cursor < hi) {
      out.emplace_back(cursor, hi);
    }
  }
  return out;
}

}  // namespace

// ---- RayStar -------------------------------------------------------------

RayStar RayStar::from_measure(MeasureState mu) {
  RayStar star(std::move(mu));
  const BalloonTree& tree = *star.tree();
  const NodeId root = tree.root();
  if (tree.children(root).size() < 2) {
    throw Error(ErrorCode::kNotAStar, "the center needs at least two rays");
  }
  star.ray_index_.assign(tree.size(), 0);
  for (NodeId first : tree.children(root)) {
    std::vector<NodeId> chain;
    NodeId v = first;
    while (!tree.is_end(v)) {
      if (tree.children(v).size() != 1) {
        throw Error(ErrorCode::kNotAStar, "node " + tree.name(v) + " does not continue a single ray");
      }
      chain.push_back(v);
      v = tree.children(v).front();
    }
    for (NodeId c : chain) {
      star.ray_index_[c] = star.rays_.size() + 1;
    }
    star.ray_index_[v] = star.rays_.size() + 1;
    star.rays_.push_back(std::move(chain));
    star.ends_.push_back(v);
  }
  return star;
}

RayStar RayStar::make(const Rational& center, const std::vector<std::vector<Rational>>& cells,
                      const std::vector<ExtendedMass>& tails) {
  if (cells.size() != tails.size()) {
    throw Error(ErrorCode::kNotAStar, "one tail per ray is required");
  }
  std::vector<NodeSpec> specs;
  specs.push_back(NodeSpec{"c", center, {}, LeafKind::kInterior, {}});
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::string ray = std::to_string(i + 1);
    std::string prev = "c";
    std::size_t prev_index = 0;
    for (std::size_t k = 0; k < cells[i].size(); ++k) {
      const std::string id = "r" + ray + "_" + std::to_string(k + 1);
      specs[prev_index].children.push_back(id);
      specs.push_back(NodeSpec{id, cells[i][k], {}, LeafKind::kInterior, {}});
      prev = id;
      prev_index = specs.size() - 1;
    }
    const std::string end = "e" + ray;
    specs[prev_index].children.push_back(end);
    specs.push_back(NodeSpec{end, std::nullopt, {}, LeafKind::kEnd, tails[i]});
  }
  return from_measure(MeasureState::declared(BalloonTree::make(std::move(specs), "c")));
}

std::size_t RayStar::max_depth() const {
  std::size_t d = 0;
  for (const auto& ray : rays_) {
    d = std::max(d, ray.size());
  }
  return d;
}

std::optional<std::size_t> RayStar::ray_of(NodeId v) const {
  const std::size_t r = ray_index_.at(v);
  if (r == 0) {
    return std::nullopt;
  }
  return r - 1;
}

// ---- IntervalSet ---------------------------------------------------------

void IntervalSet::add(std::size_t component, const Rational& lo, const Rational& hi) {
  if (lo >= hi) {
    return;
  }
  Parts& parts = parts_[component];
  parts.emplace_back(lo, hi);
  parts = merged(std::move(parts));
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
  IntervalSet out = *this;
  for (const auto& [comp, parts] : other.parts_) {
    for (const auto& [lo, hi] : parts) {
      out.add(comp, lo, hi);
    }
  }
  return out;
}

IntervalSet IntervalSet::subtract(const IntervalSet& other) const {
  IntervalSet out;
  for (const auto& [comp, parts] : parts_) {
    const auto it = other.parts_.find(comp);
    Parts rest = it == other.parts_.end() ? parts : minus(parts, it->second);
    if (!rest.empty()) {
      out.parts_[comp] = std::move(rest);
    }
  }
  return out;
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const { return subtract(subtract(other)); }

Rational IntervalSet::measure() const {
  Rational total = 0;
  for (const auto& [comp, parts] : parts_) {
    for (const auto& [lo, hi] : parts) {
      total += hi - lo;
    }
  }
  return total;
}

// ---- PLMap ---------------------------------------------------------------

PLMap PLMap::identity(std::size_t components) {
  std::vector<Piece> pieces;
  for (std::size_t k = 0; k < components; ++k) {
    pieces.push_back(Piece{k, Span{0, std::nullopt}, k, 0});
  }
  return from_pieces(std::move(pieces));
}

PLMap PLMap::from_pieces(std::vector<Piece> pieces) {
  PLMap map;
  map.pieces_ = std::move(pieces);
  map.normalize();
  return map;
}

void PLMap::normalize() {
  std::erase_if(pieces_, [](const Piece& p) { return p.span.hi && *p.span.hi <= p.span.lo; });
  std::sort(pieces_.begin(), pieces_.end(), [](const Piece& a, const Piece& b) {
    return a.src != b.src ? a.src < b.src : a.span.lo < b.span.lo;
  });
  std::vector<Piece> out;
  for (Piece& p : pieces_) {
    if (!out.empty()) {
      Piece& last = out.back();
      if (last.src == p.src && last.dst == p.dst && last.shift == p.shift && last.span.hi &&
          *last.span.hi == p.span.lo) {
        last.span.hi = p.span.hi;
        continue;
      }
    }
    out.push_back(std::move(p));
  }
  pieces_ = std::move(out);
}

std::pair<std::size_t, Rational> PLMap::apply(std::size_t component, const Rational& x) const {
  for (const Piece& p : pieces_) {
    if (p.src == component && p.span.lo <= x && below(x, p.span.hi)) {
      return {p.dst, x + p.shift};
    }
  }
  throw Error(ErrorCode::kRange, "point " + format_rational(x) + " is outside the map's domain");
}

PLMap PLMap::inverse() const {
  std::vector<Piece> pieces;
  for (const Piece& p : pieces_) {
    pieces.push_back(Piece{p.dst, Span{p.span.lo + p.shift, shifted(p.span.hi, p.shift)}, p.src, -p.shift});
  }
  return from_pieces(std::move(pieces));
}

IntervalSet PLMap::image(const IntervalSet& set) const {
  IntervalSet out;
  for (const auto& [comp, parts] : set.parts()) {
    for (const auto& [lo, hi] : parts) {
      Rational covered = 0;
      for (const Piece& p : pieces_) {
        if (p.src != comp) {
          continue;
        }
        const Rational a = std::max(lo, p.span.lo);
        const Rational b = p.span.hi ? std::min(hi, *p.span.hi) : hi;
        if (a < b) {
          out.add(p.dst, a + p.shift, b + p.shift);
          covered += b - a;
        }
      }
      if (covered != hi - lo) {
        throw Error(ErrorCode::kRange, "interval leaves the map's domain");
      }
    }
  }
  return out;
}

std::optional<Rational> PLMap::eventual_translation(std::size_t component) const {
  bool seen = false;
  for (const Piece& p : pieces_) {
    if (p.src == component && !p.span.hi) {
      return p.shift;
    }
    seen = seen || p.src == component;
  }
  // A bounded component has nothing to translate at infinity.
  return seen ? std::optional<Rational>(0) : std::nullopt;
}

Rational PLMap::reach() const {
  Rational r = 0;
  for (const Piece& p : pieces_) {
    r = std::max({r, p.span.lo, Rational(p.span.lo + p.shift)});
    if (p.span.hi) {
      r = std::max({r, *p.span.hi, Rational(*p.span.hi + p.shift)});
    }
  }
  return r;
}

bool operator==(const PLMap& lhs, const PLMap& rhs) {
  if (lhs.pieces_.size() != rhs.pieces_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < lhs.pieces_.size(); ++i) {
    const auto& a = lhs.pieces_[i];
    const auto& b = rhs.pieces_[i];
    if (a.src != b.src || a.dst != b.dst || a.shift != b.shift || a.span.lo != b.span.lo || a.span.hi != b.span.hi) {
      return false;
    }
  }
  return true;
}

PLMap compose(const PLMap& outer, const PLMap& inner) {
  std::vector<PLMap::Piece> pieces;
  for (const auto& p : inner.pieces()) {
    const Rational lo = p.span.lo + p.shift;
    const std::optional<Rational> hi = shifted(p.span.hi, p.shift);
    for (const auto& q : outer.pieces()) {
      if (q.src != p.dst) {
        continue;
      }
      const Rational a = std::max(lo, q.span.lo);
      const std::optional<Rational> b = min_hi(hi, q.span.hi);
      if (b && *b <= a) {
        continue;
      }
      pieces.push_back(PLMap::Piece{p.src, Span{a - p.shift, shifted(b, -p.shift)}, q.dst, p.shift + q.shift});
    }
  }
  return PLMap::from_pieces(std::move(pieces));
}

// ---- Realization ---------------------------------------------------------

namespace {

struct Layout {
  Rational center;
  std::vector<std::optional<Rational>> lengths;  // per ray; nullopt = infinite
};

Layout layout_of(const RayStar& star, const MeasureState& sigma) {
  Layout out;
  out.center = sigma.block(star.tree()->root());
  for (std::size_t i = 0; i < star.ray_count(); ++i) {
    Rational total = 0;
    for (NodeId v : star.cells(i)) {
      total += sigma.block(v);
    }
    const ExtendedMass& tail = sigma.tail(star.end_leaf(i));
    if (tail.is_infinite()) {
      out.lengths.emplace_back(std::nullopt);
    } else {
      out.lengths.emplace_back(total + tail.value());
    }
  }
  return out;
}

PLMap layout_identity(const Layout& layout) {
  std::vector<PLMap::Piece> pieces{{0, Span{0, layout.center}, 0, 0}};
  for (std::size_t i = 0; i < layout.lengths.size(); ++i) {
    pieces.push_back(PLMap::Piece{i + 1, Span{0, layout.lengths[i]}, i + 1, 0});
  }
  return PLMap::from_pieces(std::move(pieces));
}

// Sends flux[i] out of the center into the start of ray i (or pulls it back
// when negative). Returned mass is pooled above the kept center, outgoing
// mass is taken from the top of the pool.
PLMap center_exchange(const Layout& layout, const std::vector<Rational>& flux) {
  const std::size_t rays = layout.lengths.size();
  const std::size_t pool = rays + 1;
  std::vector<PLMap::Piece> gather{{0, Span{0, layout.center}, pool, 0}};
  Rational offset = layout.center;
  Rational outgoing = 0;
  for (std::size_t i = 0; i < rays; ++i) {
    const std::size_t comp = i + 1;
    const auto& len = layout.lengths[i];
    if (flux[i] < 0) {
      const Rational g = -flux[i];
      gather.push_back({comp, Span{0, g}, pool, offset});
      gather.push_back({comp, Span{g, len}, comp, -g});
      offset += g;
    } else {
      gather.push_back({comp, Span{0, len}, comp, flux[i]});
      outgoing += flux[i];
    }
  }
  const Rational kept = offset - outgoing;
  std::vector<PLMap::Piece> scatter{{pool, Span{0, kept}, 0, 0}};
  Rational cursor = kept;
  for (std::size_t i = 0; i < rays; ++i) {
    scatter.push_back({i + 1, Span{0, std::nullopt}, i + 1, 0});
    if (flux[i] > 0) {
      scatter.push_back({pool, Span{cursor, Rational(cursor + flux[i])}, i + 1, -cursor});
      cursor += flux[i];
    }
  }
  return compose(PLMap::from_pieces(std::move(scatter)), PLMap::from_pieces(std::move(gather)));
}

// Window past every finite coordinate of the state.
Rational window_of(const RayStar& star, const MeasureState& sigma) {
  Rational w = sigma.block(star.tree()->root());
  for (std::size_t i = 0; i < star.ray_count(); ++i) {
    Rational total = 0;
    for (NodeId v : star.cells(i)) {
      total += sigma.block(v);
    }
    const ExtendedMass& tail = sigma.tail(star.end_leaf(i));
    w = std::max(w, tail.is_finite() ? Rational(total + tail.value()) : total);
  }
  return w + 1;
}

// mu(C - h(C)) - mu(h(C) - C) for C = [start, end) on one ray component,
// end == nullopt meaning the rest of an infinite ray.
Rational set_difference_charge(const PLMap& h, std::size_t comp, const Rational& start,
                               const std::optional<Rational>& end) {
  IntervalSet c;
  if (end) {
    c.add(comp, start, *end);
    const IntervalSet hc = h.image(c);
    return c.subtract(hc).measure() - hc.subtract(c).measure();
  }
  const Rational a = abs_value(h.eventual_translation(comp).value_or(0));
  const Rational w = std::max(h.reach(), start) + a + 1;
  c.add(comp, start, w);
  IntervalSet wide;
  wide.add(comp, start, w + a + 1);
  IntervalSet hc = h.image(wide);
  IntervalSet beyond;
  beyond.add(comp, w, hc.parts().count(comp) ? hc.parts().at(comp).back().second : w);
  hc = hc.subtract(beyond);
  return c.subtract(hc).measure() - hc.subtract(c).measure();
}

}  // namespace

IntervalSet node_interval(const RayStar& star, const MeasureState& sigma, NodeId v, const Rational& window) {
  IntervalSet out;
  const auto ray = star.ray_of(v);
  if (!ray) {
    out.add(0, 0, sigma.block(v));
    return out;
  }
  Rational start = 0;
  for (NodeId u : star.cells(*ray)) {
    if (u == v) {
      out.add(*ray + 1, start, start + sigma.block(u));
      return out;
    }
    start += sigma.block(u);
  }
  const ExtendedMass& tail = sigma.tail(v);
  out.add(*ray + 1, start, tail.is_finite() ? Rational(start + tail.value()) : std::max(window, start));
  return out;
}

Realization realize_moves(const RayStar& star, const MoveWord& w) {
  require_same_tree(star.tree(), w.tree(), "star and word");
  if (!(w.base == star.measure())) {
    throw Error(ErrorCode::kTreeMismatch, "word does not start from the star's measure");
  }
  const BalloonTree& tree = *star.tree();
  const NodeId center = tree.root();
  TransportState state{w.base, FluxField::zero(w.tree())};
  PLMap map = layout_identity(layout_of(star, w.base));
  for (std::size_t i = 0; i < w.moves.size(); ++i) {
    const Move& m = w.moves[i];
    std::vector<Rational> flux(star.ray_count());
    bool through_center = false;
    if (const auto* b = std::get_if<BalloonMove>(&m)) {
      if (b->parent == center && b->child < tree.size() && tree.parent(b->child) == center) {
        flux[*star.ray_of(b->child)] = b->amount;
        through_center = true;
      }
    } else {
      const auto& r = std::get<Rearrange>(m);
      for (std::size_t j = 0; j < r.support.size(); ++j) {
        const NodeId v = r.support[j];
        if (v >= tree.size()) {
          continue;
        }
        if (v == center) {
          through_center = true;
        } else if (!tree.is_end(v)) {
          flux[*star.ray_of(v)] += r.masses[j] - state.measure.block(v);
        }
      }
    }
    TransportState next = state;
    try {
      next = apply_move(state.measure, state.flux, m);
    } catch (const Error& e) {
      throw WordError(e.code(), i + 1, e.detail());
    }
    if (through_center) {
      map = compose(center_exchange(layout_of(star, state.measure), flux), map);
    }
    state = std::move(next);
  }
  return Realization{std::move(map), std::move(state.measure)};
}

PLMap realize_word(const RayStar& star, const MoveWord& w) {
  if (!is_measure_preserving(w)) {
    throw Error(ErrorCode::kCNotDefined, "the word is not measure-preserving");
  }
  return realize_moves(star, w).map;
}

Rational cut_coordinate(const RayStar& star, std::size_t ray, const Rational& x) {
  const MeasureState& mu = star.measure();
  Rational coord = 0;
  Rational pos = 0;
  for (NodeId v : star.cells(ray)) {
    if (x < pos + 1) {
      return coord + (x - pos) * mu.block(v);
    }
    coord += mu.block(v);
    pos += 1;
  }
  const Rational s = x - pos;
  const ExtendedMass& tail = mu.tail(star.end_leaf(ray));
  return tail.is_infinite() ? Rational(coord + s) : Rational(coord + tail.value() * s / (s + 1));
}

EndCharge charge_from_definition(const RayStar& star, const PLMap& h, const Rational& cut) {
  EndCharge out = EndCharge::zero(star.tree());
  const Layout layout = layout_of(star, star.measure());
  for (std::size_t i = 0; i < star.ray_count(); ++i) {
    if (cut < static_cast<long>(star.depth(i))) {
      throw Error(ErrorCode::kCutTooShallow, "cut " + format_rational(cut) + " lies inside ray " +
                                                  std::to_string(i + 1));
    }
    out.set(star.end_leaf(i), set_difference_charge(h, i + 1, cut_coordinate(star, i, cut), layout.lengths[i]));
  }
  return out;
}

Rational transfer_into(const RayStar& star, const PLMap& h, NodeId v) {
  const auto ray = star.ray_of(v);
  if (!ray) {
    throw Error(ErrorCode::kMalformedRegion, "the center has no incoming edge");
  }
  const Layout layout = layout_of(star, star.measure());
  Rational start = 0;
  for (NodeId u : star.cells(*ray)) {
    if (u == v) {
      break;
    }
    start += star.measure().block(u);
  }
  return -set_difference_charge(h.inverse(), *ray + 1, start, layout.lengths[*ray]);
}

bool compare_oracle(const RayStar& star, const MoveWord& w, const std::vector<Rational>& cuts) {
  std::vector<Rational> at = cuts;
  if (at.empty()) {
    const Rational d = static_cast<long>(star.max_depth());
    at = {d, d + 7, d + Rational(5, 2)};
  }
  const EndCharge expected = charge_of_word(w);
  const PLMap h = realize_word(star, w);
  return std::all_of(at.begin(), at.end(),
                     [&](const Rational& cut) { return charge_from_definition(star, h, cut) == expected; });
}

std::pair<Rational, Rational> pushforward_j(const RayStar& star, const MoveWord& w, const std::vector<NodeId>& a,
                                            const std::vector<NodeId>& b) {
  const Realization real = realize_moves(star, w);
  const TreePtr& tree = star.tree();
  const Rational direct = j_value(real.state, Region(tree, a), Region(tree, b));
  const Rational window = window_of(star, real.state);
  IntervalSet sa;
  IntervalSet sb;
  for (NodeId v : a) {
    sa = sa.unite(node_interval(star, real.state, v, window));
  }
  for (NodeId v : b) {
    sb = sb.unite(node_interval(star, real.state, v, window));
  }
  const PLMap back = real.map.inverse();
  const IntervalSet pa = back.image(sa);
  const IntervalSet pb = back.image(sb);
  return {direct, pa.subtract(pb).measure() - pb.subtract(pa).measure()};
}

}  // namespace endcharge
