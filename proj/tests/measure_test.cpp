#include "doctest.h"

#include "endcharge/errors.hpp"
#include "endcharge/measure.hpp"
#include "endcharge/random_instances.hpp"
#include "support/fixtures.hpp"

using namespace endcharge;
using namespace endcharge::testing;

TEST_CASE("mass of regions") {
  const MeasureState mu = reference_measure();
  const TreePtr& t = mu.tree();
  CHECK(mass(mu, region(t, {"r", "u", "v"})) == ExtendedMass(Rational(7)));
  CHECK(mass(mu, region(t, {"l3"})) == ExtendedMass(Rational(5)));
  CHECK(mass(mu, region(t, {"u", "l1"})).is_infinite());
}

TEST_CASE("finite ends") {
  const MeasureState mu = reference_measure();
  CHECK(omega_finite_ends(mu) == ends(mu.tree(), {"l3"}));
  CHECK(omega_finite_ends(reference_measure(false)).is_empty());
}

TEST_CASE("mu equivalence") {
  const MeasureState mu = reference_measure();
  const TreePtr& t = mu.tree();
  CHECK(mu_equivalent(mu, region(t, {"u", "l1"}), region(t, {"u", "l1", "l3"})));
  CHECK_FALSE(mu_equivalent(mu, region(t, {"u", "l1"}), region(t, {"u"})));
}

TEST_CASE("compact equivalence implies mu equivalence") {
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const TreePtr t = random_tree(rng);
    const MeasureState mu = random_measure(rng, t);
    const Region a = random_region(rng, t);
    const Region b = random_region(rng, t);
    if (compactly_equivalent(a, b)) {
      CHECK(mu_equivalent(mu, a, b));
    }
  }
}

TEST_CASE("J values") {
  const MeasureState mu = reference_measure();
  const TreePtr& t = mu.tree();
  CHECK(j_value(mu, region(t, {"u", "l1"}), region(t, {"u", "l1", "v"})) == -1);
  CHECK(j_value(mu, region(t, {"u", "l1"}), region(t, {"u", "l1"})) == 0);
  CHECK(j_value(mu, region(t, {"r", "l3"}), region(t, {"l3"})) == 4);
  try {
    (void)j_value(mu, region(t, {"u", "l1"}), region(t, {"u"}));
    FAIL("expected InfiniteDifference");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInfiniteDifference);
  }
}

TEST_CASE("measure states keep masses positive") {
  MeasureState mu = reference_measure();
  const TreePtr& t = mu.tree();
  CHECK_THROWS_AS(mu.set_block(t->id("v"), Rational(0)), Error);
  CHECK_THROWS_AS(mu.set_tail(t->id("l3"), ExtendedMass(Rational(0))), Error);
  std::vector<Rational> blocks(t->size(), Rational(1));
  std::vector<ExtendedMass> tails(t->size(), ExtendedMass(Rational(1)));
  blocks[t->id("u")] = -1;
  CHECK_THROWS_AS(MeasureState(t, blocks, tails), Error);
}

TEST_CASE("J moves by at most the perturbed mass of the symmetric difference") {
  Rng rng(12);
  for (int i = 0; i < 60; ++i) {
    const TreePtr t = random_tree(rng);
    const MeasureState mu = random_measure(rng, t);
    const Region a = random_region(rng, t);
    Region b = a;
    for (NodeId v : t->blocks()) {
      if (coin(rng, 30)) {
        b = b.contains(v) ? b - Region(t, std::vector<NodeId>{v}) : b | Region(t, std::vector<NodeId>{v});
      }
    }
    MeasureState nu = mu;
    const Rational eps(1, 1000);
    for (NodeId v : t->blocks()) {
      nu.set_block(v, mu.block(v) + (coin(rng, 50) ? eps : -eps * Rational(1, 2)));
    }
    const Region diff = (a - b) | (b - a);
    const Rational moved = abs_value(j_value(nu, a, b) - j_value(mu, a, b));
    CHECK(moved <= eps * static_cast<long>(diff.count()));
  }
}
