#include "doctest.h"

#include "endcharge/errors.hpp"
#include "endcharge/random_instances.hpp"
#include "endcharge/transport.hpp"
#include "support/fixtures.hpp"

using namespace endcharge;
using namespace endcharge::testing;

TEST_CASE("single balloon move") {
  const MeasureState mu = reference_measure();
  const TreePtr& t = mu.tree();
  const TransportState s = apply_move(mu, FluxField::zero(t), balloon(t, "r", "u", 3));
  CHECK(s.measure.block(t->id("r")) == 1);
  CHECK(s.measure.block(t->id("u")) == 5);
  CHECK(flux_into(s.flux, "u") == 3);
  CHECK(flux_into(s.flux, "v") == 0);
}

TEST_CASE("no-op rearrangement") {
  const MeasureState mu = reference_measure();
  const TreePtr& t = mu.tree();
  const Rearrange r{{t->id("r"), t->id("u"), t->id("v")}, {Rational(4), Rational(2), Rational(1)}};
  const TransportState s = apply_move(mu, FluxField::zero(t), r);
  CHECK(s.measure == mu);
  CHECK(s.flux.is_zero());
}

TEST_CASE("rearrangement moves flux along internal edges") {
  const MeasureState mu = reference_measure();
  const TreePtr& t = mu.tree();
  const Rearrange r{{t->id("r"), t->id("u"), t->id("v")}, {Rational(1), Rational(5), Rational(1)}};
  const TransportState s = apply_move(mu, FluxField::zero(t), r);
  CHECK(s.measure.block(t->id("u")) == 5);
  CHECK(flux_into(s.flux, "u") == 3);
  CHECK(flux_into(s.flux, "v") == 0);
}

TEST_CASE("move errors") {
  const MeasureState mu = reference_measure();
  const TreePtr& t = mu.tree();
  const FluxField zero = FluxField::zero(t);
  auto code_of = [&](const Move& m) {
    try {
      (void)apply_move(mu, zero, m);
    } catch (const Error& e) {
      return e.code();
    }
    FAIL("move should have been rejected");
    return ErrorCode::kParse;
  };
  CHECK(code_of(balloon(t, "r", "v", -3)) == ErrorCode::kNonPositiveBlock);
  CHECK(code_of(balloon(t, "u", "v", 1)) == ErrorCode::kBadEdge);
  CHECK(code_of(balloon(t, "r", "l3", 5)) == ErrorCode::kNonPositiveBlock);
  CHECK(code_of(Rearrange{{t->id("r"), t->id("u")}, {Rational(1), Rational(4)}}) == ErrorCode::kMassNotConserved);
  CHECK(code_of(Rearrange{{t->id("u"), t->id("v")}, {Rational(1), Rational(2)}}) == ErrorCode::kBadSupport);
  CHECK(code_of(Rearrange{{t->id("u"), t->id("l1")}, {Rational(1), Rational(1)}}) == ErrorCode::kBadSupport);
}

TEST_CASE("reference word") {
  const MoveWord w = reference_word();
  const TransportState s = apply_word(w);
  CHECK(s.measure == w.base);
  CHECK(flux_into(s.flux, "u") == 3);
  CHECK(flux_into(s.flux, "l1") == 3);
  CHECK(flux_into(s.flux, "v") == -3);
  CHECK(flux_into(s.flux, "l2") == -3);
  CHECK(flux_into(s.flux, "l3") == 0);
  CHECK(is_measure_preserving(w));
  const TreePtr& t = w.tree();
  CHECK(charge_of_word(w) == charge(t, {{"l1", 3}, {"l2", -3}}));
}

TEST_CASE("swapped reference word fails at the first move") {
  MoveWord w = reference_word();
  std::swap(w.moves[0], w.moves[1]);
  try {
    (void)apply_word(w);
    FAIL("expected NonPositiveBlock");
  } catch (const WordError& e) {
    CHECK(e.code() == ErrorCode::kNonPositiveBlock);
    CHECK(e.position() == 1);
  }
}

TEST_CASE("empty word") {
  const MeasureState mu = reference_measure();
  const MoveWord w = MoveWord::empty(mu);
  const TransportState s = apply_word(w);
  CHECK(s.measure == mu);
  CHECK(s.flux.is_zero());
  CHECK(is_measure_preserving(w));
  CHECK(charge_of_word(w).is_zero());
  CHECK(invert_word(w).is_empty());
}

TEST_CASE("flux into a finite tail is not measure preserving") {
  const MeasureState mu = reference_measure();
  const TreePtr& t = mu.tree();
  const MoveWord w{{balloon(t, "r", "l3", 1),
                    Rearrange{{t->id("r"), t->id("u")}, {Rational(4), Rational(1)}}},
                   mu};
  CHECK_FALSE(is_measure_preserving(w));
  try {
    (void)charge_of_word(w);
    FAIL("expected CNotDefined");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kCNotDefined);
  }
}

TEST_CASE("concatenation and inversion") {
  const MoveWord w = reference_word();
  const TreePtr& t = w.tree();
  CHECK(charge_of_word(concat(w, w)) == charge(t, {{"l1", 6}, {"l2", -6}}));
  const TransportState s = apply_word(concat(w, invert_word(w)));
  CHECK(s.measure == w.base);
  CHECK(s.flux.is_zero());
  CHECK(charge_of_word(invert_word(w)) == -charge_of_word(w));
}

TEST_CASE("region transfer") {
  const MoveWord w = reference_word();
  const TreePtr& t = w.tree();
  CHECK(region_transfer(w, region(t, {"u", "l1"})) == 3);
  CHECK(region_transfer(w, region(t, {"u", "l1", "v", "l2"})) == 0);
  CHECK(region_transfer(w, Region::all(t)) == 0);
}

TEST_CASE("charge is a homomorphism on random words") {
  Rng rng(21);
  for (int i = 0; i < 40; ++i) {
    const TreePtr t = random_tree(rng);
    const MeasureState mu = random_measure(rng, t);
    const MoveWord w1 = random_preserving_word(rng, mu);
    const MoveWord w2 = random_preserving_word(rng, mu);
    REQUIRE(is_measure_preserving(w1));
    REQUIRE(is_measure_preserving(w2));
    const EndCharge sum = linear_combine(1, charge_of_word(w1), 1, charge_of_word(w2));
    CHECK(charge_of_word(concat(w1, w2)) == sum);
    CHECK(charge_of_word(invert_word(w1)) == -charge_of_word(w1));
    CHECK(validate_charge(mu, charge_of_word(w1)));
  }
}

TEST_CASE("region transfer of a compact region vanishes on preserving words") {
  Rng rng(22);
  for (int i = 0; i < 40; ++i) {
    const TreePtr t = random_tree(rng);
    const MeasureState mu = random_measure(rng, t);
    const MoveWord w = random_preserving_word(rng, mu);
    std::vector<NodeId> blocks;
    for (NodeId v : t->blocks()) {
      if (coin(rng, 50)) {
        blocks.push_back(v);
      }
    }
    CHECK(region_transfer(w, Region(t, blocks)) == 0);
  }
}
