#include "doctest.h"

#include "endcharge/errors.hpp"
#include "endcharge/pl1d_oracle.hpp"
#include "endcharge/random_instances.hpp"
#include "endcharge/section.hpp"
#include "support/fixtures.hpp"

using namespace endcharge;
using namespace endcharge::testing;

namespace {

// Center 4; ray 1 has one cell of mass 2, ray 2 one cell of mass 1, ray 3 is
// a bare tail of mass 5.
RayStar three_rays() {
  return RayStar::make(Rational(4), {{Rational(2)}, {Rational(1)}, {}},
                       {ExtendedMass::infinity(), ExtendedMass::infinity(), ExtendedMass(Rational(5))});
}

MoveWord star_word(const RayStar& s) {
  const TreePtr& t = s.tree();
  return MoveWord{{balloon(t, "c", "r1_1", 3), balloon(t, "r1_1", "e1", 3), balloon(t, "r2_1", "e2", -3),
                   balloon(t, "c", "r2_1", -3)},
                  s.measure()};
}

bool is_identity(const PLMap& h) {
  for (const auto& p : h.pieces()) {
    if (p.src != p.dst || p.shift != 0) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("star construction") {
  const RayStar s = three_rays();
  CHECK(s.ray_count() == 3);
  CHECK(s.depth(0) == 1);
  CHECK(s.depth(2) == 0);
  CHECK(s.max_depth() == 1);
  CHECK(s.ray_of(s.tree()->id("r2_1")) == std::optional<std::size_t>(1));
  CHECK_FALSE(s.ray_of(s.tree()->id("c")).has_value());
  try {
    const TreePtr forked = BalloonTree::make(
        {{"r", Rational(1), {"u"}, LeafKind::kInterior, {}},
         {"u", Rational(1), {"a", "b"}, LeafKind::kInterior, {}},
         {"a", std::nullopt, {}, LeafKind::kEnd, ExtendedMass::infinity()},
         {"b", std::nullopt, {}, LeafKind::kEnd, ExtendedMass::infinity()}},
        "r");
    (void)RayStar::from_measure(MeasureState::declared(forked));
    FAIL("expected NotAStar");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotAStar);
  }
}

TEST_CASE("interval sets") {
  IntervalSet a;
  a.add(0, 0, 3);
  a.add(0, 5, 7);
  IntervalSet b;
  b.add(0, 2, 6);
  CHECK(a.measure() == 5);
  CHECK(a.unite(b).measure() == 7);
  CHECK(a.intersect(b).measure() == 2);
  CHECK(a.subtract(b).measure() == 3);
  CHECK(b.subtract(a).measure() == 2);
}

TEST_CASE("empty word realizes the identity") {
  const RayStar s = three_rays();
  const PLMap h = realize_word(s, MoveWord::empty(s.measure()));
  CHECK(is_identity(h));
  CHECK(charge_from_definition(s, h, 1).is_zero());
  CHECK(compare_oracle(s, MoveWord::empty(s.measure())));
}

TEST_CASE("three-ray transfer") {
  const RayStar s = three_rays();
  const MoveWord w = star_word(s);
  const PLMap h = realize_word(s, w);
  CHECK(h.eventual_translation(1) == std::optional<Rational>(3));
  CHECK(h.eventual_translation(2) == std::optional<Rational>(-3));
  CHECK(h.eventual_translation(3) == std::optional<Rational>(0));

  const TreePtr& t = s.tree();
  const EndCharge expected = charge(t, {{"e1", 3}, {"e2", -3}});
  const Rational depth(static_cast<long>(s.max_depth()));
  CHECK(charge_from_definition(s, h, depth) == expected);
  CHECK(charge_from_definition(s, h, depth + 7) == expected);
  CHECK(charge_from_definition(s, h, depth + Rational(5, 2)) == expected);
  CHECK(charge_from_definition(s, h, depth) == charge_of_word(w));
  CHECK(compare_oracle(s, w));

  const FluxField flux = apply_word(w).flux;
  for (NodeId v = 0; v < t->size(); ++v) {
    if (v != t->root()) {
      CHECK(transfer_into(s, h, v) == flux.at(v));
    }
  }
  try {
    (void)charge_from_definition(s, h, Rational(1, 2));
    FAIL("expected CutTooShallow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kCutTooShallow);
  }
}

TEST_CASE("realized maps are measure preserving") {
  Rng rng(51);
  for (int i = 0; i < 40; ++i) {
    const RayStar s = random_star(rng);
    const MoveWord w = random_preserving_word(rng, s.measure());
    const Realization r = realize_moves(s, w);
    CHECK(r.state == apply_word(w).measure);
    CHECK(is_identity(compose(r.map.inverse(), r.map)));
    CHECK(compare_oracle(s, w));
  }
}

TEST_CASE("kernel words have zero eventual translation") {
  Rng rng(52);
  for (int i = 0; i < 30; ++i) {
    const RayStar s = random_star(rng);
    const MoveWord w = random_preserving_word(rng, s.measure());
    const MoveWord kernel = factorize(w).kernel;
    const PLMap h = realize_word(s, kernel);
    for (std::size_t ray = 0; ray < s.ray_count(); ++ray) {
      const auto shift = h.eventual_translation(ray + 1);
      CHECK((!shift || *shift == 0));
    }
  }
}

TEST_CASE("non-preserving words have no realization") {
  const RayStar s = three_rays();
  const TreePtr& t = s.tree();
  const MoveWord w{{balloon(t, "c", "r1_1", 1)}, s.measure()};
  try {
    (void)realize_word(s, w);
    FAIL("expected CNotDefined");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kCNotDefined);
  }
}
