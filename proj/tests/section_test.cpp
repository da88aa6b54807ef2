#include "doctest.h"

#include "endcharge/errors.hpp"
#include "endcharge/random_instances.hpp"
#include "endcharge/section.hpp"
#include "support/fixtures.hpp"

using namespace endcharge;
using namespace endcharge::testing;

namespace {

ErrorCode code_of(const auto& call) {
  try {
    call();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kParse;
}

}  // namespace

TEST_CASE("forced flux on the reference tree") {
  const MeasureState mu = reference_measure();
  const TreePtr& t = mu.tree();
  const EndCharge a = charge(t, {{"l1", 3}, {"l2", -3}});
  const FluxField phi = forced_flux(mu, a);
  CHECK(flux_into(phi, "u") == 3);
  CHECK(flux_into(phi, "l1") == 3);
  CHECK(flux_into(phi, "v") == -3);
  CHECK(flux_into(phi, "l2") == -3);
  CHECK(flux_into(phi, "l3") == 0);
  CHECK(phi == kirchhoff_solve(mu, a));
  CHECK(forced_flux(mu, EndCharge::zero(t)).is_zero());
}

TEST_CASE("forced flux with three infinite ends") {
  const MeasureState mu = reference_measure(false);
  const TreePtr& t = mu.tree();
  const EndCharge a = charge(t, {{"l1", 1}, {"l2", 1}, {"l3", -2}});
  const FluxField phi = forced_flux(mu, a);
  CHECK(flux_into(phi, "l3") == -2);
  CHECK(flux_into(phi, "u") == 1);
  CHECK(flux_into(phi, "v") == 1);
  CHECK(flux_into(phi, "l1") == 1);
  CHECK(flux_into(phi, "l2") == 1);
}

TEST_CASE("forced flux rejects invalid charges") {
  const MeasureState mu = reference_measure();
  const EndCharge bad = charge(mu.tree(), {{"l1", 5}, {"l3", -5}});
  CHECK(code_of([&] { (void)forced_flux(mu, bad); }) == ErrorCode::kInvalidCharge);
}

TEST_CASE("forced flux agrees with Gaussian elimination") {
  Rng rng(31);
  for (int i = 0; i < 60; ++i) {
    const TreePtr t = random_tree(rng, TreeShape{4, 24, 3, 60});
    const MeasureState mu = random_measure(rng, t);
    const EndCharge a = random_charge(rng, mu);
    const FluxField phi = forced_flux(mu, a);
    CHECK(phi == kirchhoff_solve(mu, a));
    for (NodeId v : t->blocks()) {
      CHECK(phi.divergence(v) == 0);
    }
  }
}

TEST_CASE("feasibility intervals") {
  const MeasureState mu = reference_measure();
  const TreePtr& t = mu.tree();
  const FeasibilityInterval open = feasibility_interval(mu, region(t, {"u", "l1"}), region(t, {"v", "l2", "l3", "r"}));
  CHECK(open.below.is_infinite());
  CHECK(open.above.is_infinite());

  const FeasibilityInterval block = feasibility_interval(mu, region(t, {"v"}), region(t, {"r"}));
  CHECK(block.below == ExtendedMass(Rational(1)));
  CHECK(block.above == ExtendedMass(Rational(4)));
  CHECK(block.contains(Rational(39, 10)));
  CHECK_FALSE(block.contains(Rational(4)));
  CHECK_FALSE(block.contains(Rational(-1)));

  const FeasibilityInterval tail = feasibility_interval(mu, region(t, {"l3"}), region(t, {"r"}));
  CHECK(tail.below == ExtendedMass(Rational(5)));
  CHECK(tail.above == ExtendedMass(Rational(4)));

  CHECK(code_of([&] { (void)feasibility_interval(mu, region(t, {"r", "v"}), region(t, {"r"})); }) ==
        ErrorCode::kBadDecomposition);
}

TEST_CASE("balloon parameter") {
  const MeasureState mu = reference_measure();
  const TreePtr& t = mu.tree();
  const Region b = region(t, {"v"});
  const Region n = region(t, {"r"});
  CHECK(solve_balloon_parameter(mu, b, n, 0) == 0);
  CHECK(solve_balloon_parameter(mu, b, n, 2) == Rational(1, 2));
  CHECK(solve_balloon_parameter(mu, b, n, Rational(-1, 2)) == Rational(-1, 2));
  CHECK(code_of([&] { (void)solve_balloon_parameter(mu, b, n, -1); }) == ErrorCode::kInfeasibleTransfer);
  CHECK(code_of([&] { (void)solve_balloon_parameter(mu, b, n, 4); }) == ErrorCode::kInfeasibleTransfer);
}

TEST_CASE("gauge round trip") {
  const std::vector<FeasibilityInterval> intervals{
      {ExtendedMass(Rational(1)), ExtendedMass(Rational(4))},
      {ExtendedMass::infinity(), ExtendedMass(Rational(3))},
      {ExtendedMass(Rational(2)), ExtendedMass::infinity()},
      {ExtendedMass::infinity(), ExtendedMass::infinity()},
  };
  const std::vector<Rational> params{Rational(0), Rational(1, 3), Rational(-1, 3), Rational(9, 10), Rational(-9, 10)};
  for (const auto& iv : intervals) {
    for (const Rational& t : params) {
      const Rational delta = gauge_transfer(iv, t);
      CHECK(iv.contains(delta));
      CHECK(gauge_parameter(iv, delta) == t);
    }
  }
}

TEST_CASE("balance step from the empty region") {
  const MeasureState mu = reference_measure();
  const TreePtr& t = mu.tree();
  const EndCharge a = charge(t, {{"l1", 3}, {"l2", -3}});
  const MoveWord none = MoveWord::empty(mu);
  const Region inner = Region::empty(t);
  const Region outer = region(t, {"r", "u", "v"});
  std::vector<TransferRecord> trace;
  const MoveWord h = balance_step(mu, inner, outer, none, none, a, SectionOptions{{}, &trace});
  const TransportState s = apply_word(h);
  CHECK(flux_into(s.flux, "u") == 3);
  CHECK(flux_into(s.flux, "v") == -3);
  CHECK(flux_into(s.flux, "l3") == 0);
  for (NodeId v : outer.nodes()) {
    CHECK(s.measure.block(v) == mu.block(v));
  }
  CHECK_FALSE(trace.empty());

  CHECK(balance_step(mu, inner, outer, none, none, EndCharge::zero(t)).is_empty());
}

TEST_CASE("balance step preconditions") {
  const MeasureState mu = reference_measure();
  const TreePtr& t = mu.tree();
  const EndCharge a = charge(t, {{"l1", 3}, {"l2", -3}});
  const MoveWord none = MoveWord::empty(mu);
  const Region top = region(t, {"r"});
  const Region all_blocks = region(t, {"r", "u", "v"});
  CHECK(code_of([&] { (void)balance_step(mu, all_blocks, top, none, none, a); }) == ErrorCode::kBadDecomposition);
  CHECK(code_of([&] { (void)balance_step(mu, region(t, {"u"}), all_blocks, none, none, a); }) ==
        ErrorCode::kBadDecomposition);
  // f and g agree on {r} but the component below u does not carry a(l1).
  CHECK(code_of([&] { (void)balance_step(mu, top, all_blocks, none, none, a); }) == ErrorCode::kPreconditionFailed);
}

TEST_CASE("section on the reference tree") {
  const MeasureState mu = reference_measure();
  const TreePtr& t = mu.tree();
  const EndCharge a = charge(t, {{"l1", 3}, {"l2", -3}});
  const MoveWord s = build_section(mu, a);
  const TransportState final_state = apply_word(s);
  CHECK(final_state.measure == mu);
  CHECK(final_state.flux == forced_flux(mu, a));
  CHECK(extensionally_equal(s, reference_word()));
  CHECK(build_section(mu, EndCharge::zero(t)).is_empty());
  CHECK(code_of([&] { (void)build_section(mu, charge(t, {{"l1", 1}})); }) == ErrorCode::kInvalidCharge);
}

TEST_CASE("section with an explicit exhaustion") {
  const MeasureState mu = reference_measure();
  const TreePtr& t = mu.tree();
  const EndCharge a = charge(t, {{"l1", 3}, {"l2", -3}});
  const Exhaustion ex{{region(t, {"r", "u"}), region(t, {"r", "u", "v"})}};
  CHECK(charge_of_word(build_section(mu, a, ex)) == a);
  const Exhaustion short_ex{{region(t, {"r"})}};
  CHECK(code_of([&] { (void)build_section(mu, a, short_ex); }) == ErrorCode::kBadDecomposition);
}

TEST_CASE("section round trip on random trees") {
  Rng rng(32);
  for (int i = 0; i < 40; ++i) {
    const TreePtr t = random_tree(rng);
    const MeasureState mu = random_measure(rng, t);
    const EndCharge a = random_charge(rng, mu);
    const MoveWord s = build_section(mu, a);
    CHECK(is_measure_preserving(s));
    CHECK(charge_of_word(s) == a);
    CHECK(apply_word(s).flux == kirchhoff_solve(mu, a));
  }
}

TEST_CASE("factorization") {
  const MoveWord w = reference_word();
  const TreePtr& t = w.tree();
  const Factorization f = factorize(w);
  CHECK(f.charge == charge(t, {{"l1", 3}, {"l2", -3}}));
  CHECK(charge_of_word(f.kernel).is_zero());
  CHECK(extensionally_equal(concat(f.kernel, build_section(w.base, f.charge)), w));

  const Factorization e = factorize(MoveWord::empty(w.base));
  CHECK(e.kernel.is_empty());
  CHECK(e.charge.is_zero());

  const MoveWord loop = concat(w, invert_word(w));
  const Factorization k = factorize(loop);
  CHECK(k.charge.is_zero());
  CHECK(extensionally_equal(k.kernel, loop));
}

TEST_CASE("retraction") {
  const MoveWord w = reference_word();
  const TreePtr& t = w.tree();
  CHECK(extensionally_equal(retract(w, 0), w));
  CHECK(charge_of_word(retract(w, 1)).is_zero());
  CHECK(charge_of_word(retract(w, Rational(1, 2))) ==
        linear_combine(Rational(3, 2), charge(t, {{"l1", 1}, {"l2", -1}}), 0, EndCharge::zero(t)));
  CHECK(code_of([&] { (void)retract(w, Rational(3, 2)); }) == ErrorCode::kRange);
  CHECK(code_of([&] { (void)retract(w, -1); }) == ErrorCode::kRange);
}

TEST_CASE("forced flux is bounded by the max-abs gauge of the charge") {
  Rng rng(33);
  for (int i = 0; i < 60; ++i) {
    const TreePtr t = random_tree(rng);
    const MeasureState mu = random_measure(rng, t);
    const EndCharge a = random_charge(rng, mu);
    const EndCharge b = random_charge(rng, mu);
    const EndCharge d = linear_combine(1, a, -1, b);
    const FluxField fa = forced_flux(mu, a);
    const FluxField fb = forced_flux(mu, b);
    const Rational bound = d.max_abs() * static_cast<long>(t->end_leaves().size());
    for (NodeId v = 0; v < t->size(); ++v) {
      if (v != t->root()) {
        CHECK(abs_value(fa.at(v) - fb.at(v)) <= bound);
      }
    }
  }
}
