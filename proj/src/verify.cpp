#include "endcharge/verify.hpp"

#include <chrono>
#include <optional>
#include <sstream>

#include "endcharge/errors.hpp"
#include "endcharge/pl1d_oracle.hpp"
#include "endcharge/proper_morphism.hpp"
#include "endcharge/random_instances.hpp"
#include "endcharge/section.hpp"

namespace endcharge {

namespace {

using Failure = std::optional<std::string>;

template <typename Body>
void run_cases(CriterionResult& result, std::size_t n, std::uint64_t seed, std::size_t& infeasible, Body body) {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    Failure failure;
    try {
      failure = body(rng);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kInfeasibleTransfer) {
        ++infeasible;
      }
      failure = e.what();
    }
    ++result.cases;
    if (failure) {
      if (result.failures == 0) {
        result.note = "case " + std::to_string(i) + ": " + *failure;
      }
      ++result.failures;
    }
  }
  result.seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

TreeShape shape_of(const VerifyConfig& config) {
  TreeShape shape;
  shape.max_depth = config.max_depth;
  shape.max_nodes = config.max_nodes;
  return shape;
}

FluxField oracle_flux(const VerifyConfig& config, const MeasureState& mu, const EndCharge& a) {
  return config.flux_oracle ? config.flux_oracle(mu, a) : forced_flux(mu, a);
}

EndCharge sum(const EndCharge& a, const EndCharge& b) { return linear_combine(1, a, 1, b); }

// Region differing from r only on nodes of finite mass.
Region finite_perturbation(Rng& rng, const MeasureState& mu, const Region& r) {
  const BalloonTree& tree = *mu.tree();
  std::vector<NodeId> nodes;
  for (NodeId v = 0; v < tree.size(); ++v) {
    const bool flip = mu.node_mass(v).is_finite() && coin(rng, 30);
    if (r.contains(v) != flip) {
      nodes.push_back(v);
    }
  }
  return Region(mu.tree(), nodes);
}

Rational finite_mass(const MeasureState& mu, const Region& r) { return mass(mu, r).value(); }

CriterionResult criterion(int id, std::string name) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  return r;
}

}  // namespace

bool VerifyReport::all_passed() const {
  for (const auto& c : criteria) {
    if (!c.passed) {
      return false;
    }
  }
  return !criteria.empty();
}

std::string VerifyReport::summary() const {
  std::ostringstream out;
  for (const auto& c : criteria) {
    out << (c.passed ? "PASS" : "FAIL") << "  " << c.id << " " << c.name << ": " << c.cases << " cases, "
        << c.failures << " failures";
    out.setf(std::ios::fixed);
    out.precision(2);
    out << " (" << c.seconds << " s)";
    if (!c.note.empty()) {
      out << " [" << c.note << "]";
    }
    out << "\n";
  }
  return out.str();
}

CriterionResult verify_section_roundtrip(const VerifyConfig& config, std::size_t& infeasible) {
  CriterionResult r = criterion(1, "section round-trip");
  run_cases(r, config.cases, config.seed * 1000 + 1, infeasible, [&](Rng& rng) -> Failure {
    const TreePtr tree = random_tree(rng, shape_of(config));
    const MeasureState mu = MeasureState::declared(tree);
    const EndCharge a = random_charge(rng, mu);
    if (!build_section(mu, EndCharge::zero(tree)).is_empty()) {
      return "section of the zero charge is not the empty word";
    }
    const MoveWord w = build_section(mu, a);
    if (!is_measure_preserving(w)) {
      return "section word is not measure-preserving";
    }
    if (!(charge_of_word(w) == a)) {
      return "charge of the section differs from the input";
    }
    return std::nullopt;
  });
  r.passed = r.failures == 0 && r.cases >= 100 && r.seconds < 10;
  if (r.seconds >= 10) {
    r.note = "runtime exceeds 10 s";
  }
  return r;
}

CriterionResult verify_homomorphism(const VerifyConfig& config, std::size_t& infeasible) {
  CriterionResult r = criterion(2, "charge homomorphism");
  run_cases(r, config.cases, config.seed * 1000 + 2, infeasible, [&](Rng& rng) -> Failure {
    const TreePtr tree = random_tree(rng, shape_of(config));
    const MeasureState mu = random_measure(rng, tree);
    const MoveWord w1 = random_preserving_word(rng, mu, draw(rng, 1, 12));
    const MoveWord w2 = random_preserving_word(rng, mu, draw(rng, 1, 12));
    const EndCharge c1 = charge_of_word(w1);
    const EndCharge c2 = charge_of_word(w2);
    if (!(charge_of_word(concat(w1, w2)) == sum(c1, c2))) {
      return "c(w1 w2) != c(w1) + c(w2)";
    }
    if (!(charge_of_word(invert_word(w1)) == -c1)) {
      return "c(w^-1) != -c(w)";
    }
    return std::nullopt;
  });
  r.passed = r.failures == 0 && r.cases >= 100;
  return r;
}

CriterionResult verify_j_algebra(const VerifyConfig& config, std::size_t& infeasible) {
  CriterionResult r = criterion(3, "J algebra");
  run_cases(r, std::max<std::size_t>(200, 2 * config.cases), config.seed * 1000 + 3, infeasible,
            [&](Rng& rng) -> Failure {
    TreeShape shape = shape_of(config);
    shape.max_depth = std::min<std::size_t>(shape.max_depth, 4);
    shape.max_nodes = std::min<std::size_t>(shape.max_nodes, 24);
    const TreePtr tree = random_tree(rng, shape);
    const MeasureState mu = random_measure(rng, tree);

    // (1) and (2).
    const Region a = random_region(rng, tree);
    const Region b = finite_perturbation(rng, mu, a);
    const Region c = finite_perturbation(rng, mu, b);
    if (!mu_equivalent(mu, a, b) || !mu_equivalent(mu, a, c)) {
      return "finite perturbations are not mu-equivalent";
    }
    if (mass(mu, a).is_finite() && j_value(mu, a, b) != finite_mass(mu, a) - finite_mass(mu, b)) {
      return "J(A,B) != mu(A) - mu(B) for finite A";
    }
    if (j_value(mu, a, b) + j_value(mu, b, c) != j_value(mu, a, c)) {
      return "J is not a cocycle";
    }

    // (3): disjoint pairs.
    std::vector<NodeId> left;
    std::vector<NodeId> right;
    for (NodeId v = 0; v < tree->size(); ++v) {
      const auto slot = draw(rng, 0, 2);
      if (slot == 0) {
        left.push_back(v);
      } else if (slot == 1) {
        right.push_back(v);
      }
    }
    const Region p(tree, left);
    const Region q(tree, right);
    const Region p2 = finite_perturbation(rng, mu, p);
    const Region q2 = finite_perturbation(rng, mu, q) - p2;
    if (mu_equivalent(mu, q, q2) && (p2 & q2).is_empty()) {
      if (j_value(mu, p | q, p2 | q2) != j_value(mu, p, p2) + j_value(mu, q, q2)) {
        return "J is not additive on disjoint unions";
      }
    }

    // (4) through a tree contraction.
    const TreeMorphism pi = random_morphism(rng, tree);
    const MeasureState up = random_measure(rng, pi.source());
    const MeasureState down = push_measure(pi, up);
    const Region t1 = random_region(rng, tree);
    const Region t2 = finite_perturbation(rng, down, t1);
    if (j_value(down, t1, t2) != j_value(up, preimage(pi, t1), preimage(pi, t2))) {
      return "J of the pushed measure differs from J of preimages";
    }
    const MoveWord w = random_preserving_word(rng, up, draw(rng, 1, 8), pi.collapsed_nodes());
    const MoveWord pushed = push_word(pi, w);
    if (region_transfer(pushed, t1) != region_transfer(w, preimage(pi, t1))) {
      return "region transfer is not preserved by pushing";
    }

    // (4) on a star, for a word cut off mid-way so the state has moved.
    const RayStar star = random_star(rng, 4, 3);
    const MoveWord full = random_preserving_word(rng, star.measure(), draw(rng, 1, 8));
    MoveWord prefix = MoveWord::empty(full.base);
    prefix.moves.assign(full.moves.begin(), full.moves.begin() + draw(rng, 0, full.moves.size()));
    const TransportState st = apply_word(prefix);
    const Region s1 = random_region(rng, star.tree());
    const Region s2 = finite_perturbation(rng, st.measure, s1);
    const auto [direct, pulled] = pushforward_j(star, prefix, s1.nodes(), s2.nodes());
    if (direct != pulled) {
      return "J of the realized pushforward differs from J of preimages";
    }
    return std::nullopt;
  });
  r.passed = r.failures == 0 && r.cases >= 200;
  return r;
}

CriterionResult verify_flux_uniqueness(const VerifyConfig& config, std::size_t& infeasible) {
  CriterionResult r = criterion(4, "flux uniqueness");
  // Same instances as the round-trip suite.
  run_cases(r, config.cases, config.seed * 1000 + 1, infeasible, [&](Rng& rng) -> Failure {
    const TreePtr tree = random_tree(rng, shape_of(config));
    const MeasureState mu = MeasureState::declared(tree);
    const EndCharge a = random_charge(rng, mu);
    const MoveWord w = build_section(mu, a);
    const FluxField flux = apply_word(w).flux;
    if (!(flux == oracle_flux(config, mu, a))) {
      return "section flux differs from the oracle";
    }
    for (NodeId v : tree->blocks()) {
      if (flux.divergence(v) != 0) {
        return "nonzero divergence at " + tree->name(v);
      }
    }
    return std::nullopt;
  });
  r.passed = r.failures == 0 && r.cases >= 100;
  return r;
}

CriterionResult verify_diagram(const VerifyConfig& config, std::size_t& infeasible) {
  CriterionResult r = criterion(5, "pushforward diagram");
  run_cases(r, config.cases, config.seed * 1000 + 5, infeasible, [&](Rng& rng) -> Failure {
    TreeShape shape = shape_of(config);
    shape.max_nodes = std::min<std::size_t>(shape.max_nodes, 40);
    const TreePtr tree = random_tree(rng, shape);
    const TreeMorphism pi = random_morphism(rng, tree);
    const MeasureState mu = random_measure(rng, pi.source());
    const MoveWord w = random_preserving_word(rng, mu, draw(rng, 1, 12), pi.collapsed_nodes());
    if (!check_diagram(pi, w)) {
      return "pushed charge differs from the charge of the pushed word";
    }
    const MeasureState nu = push_measure(pi, mu);
    const EndCharge a = random_charge(rng, nu);
    const MoveWord lifted = lift_section(pi, nu, a);
    if (!(charge_of_word(lifted) == a)) {
      return "lifted section has the wrong charge";
    }
    return std::nullopt;
  });
  r.passed = r.failures == 0 && r.cases >= 100;
  return r;
}

CriterionResult verify_factorization(const VerifyConfig& config, std::size_t& infeasible) {
  CriterionResult r = criterion(6, "factorization and retraction");
  run_cases(r, config.cases, config.seed * 1000 + 6, infeasible, [&](Rng& rng) -> Failure {
    TreeShape shape = shape_of(config);
    shape.max_nodes = std::min<std::size_t>(shape.max_nodes, 40);
    const TreePtr tree = random_tree(rng, shape);
    const MeasureState mu = random_measure(rng, tree);
    const MoveWord w = random_preserving_word(rng, mu, draw(rng, 1, 12));
    const Factorization fz = factorize(w);
    if (!charge_of_word(fz.kernel).is_zero()) {
      return "kernel word has nonzero charge";
    }
    if (!extensionally_equal(concat(build_section(mu, fz.charge), fz.kernel), w)) {
      return "section followed by the kernel is not w";
    }
    if (!extensionally_equal(retract(w, 0), w)) {
      return "retract at 0 moves w";
    }
    if (!charge_of_word(retract(w, 1)).is_zero()) {
      return "retract at 1 leaves charge";
    }
    for (const Rational& tau : {Rational(1, 3), Rational(1, 2), Rational(3, 4)}) {
      if (!(charge_of_word(retract(w, tau)) == linear_combine(1 - tau, fz.charge, 0, fz.charge))) {
        return "retract is not linear in tau";
      }
      if (!charge_of_word(retract(fz.kernel, tau)).is_zero() || !extensionally_equal(retract(fz.kernel, tau), fz.kernel)) {
        return "retract moves a kernel word";
      }
    }
    return std::nullopt;
  });
  r.passed = r.failures == 0 && r.cases >= 100;
  return r;
}

CriterionResult verify_oracle(const VerifyConfig& config, std::size_t& infeasible) {
  CriterionResult r = criterion(7, "geometric oracle");
  run_cases(r, config.cases, config.seed * 1000 + 7, infeasible, [&](Rng& rng) -> Failure {
    const RayStar star = random_star(rng);
    const Rational d = static_cast<long>(star.max_depth());
    const std::vector<Rational> cuts{d, d + 7, d + Rational(5, 2), d + Rational(1, 3)};
    const MoveWord w = random_preserving_word(rng, star.measure(), draw(rng, 1, 12));
    if (!compare_oracle(star, w, cuts)) {
      return "definition-based charge of a random word disagrees";
    }
    const MoveWord s = build_section(star.measure(), random_charge(rng, star.measure()));
    if (!compare_oracle(star, s, cuts)) {
      return "definition-based charge of a section disagrees";
    }
    const PLMap h = realize_word(star, w);
    const FluxField flux = apply_word(w).flux;
    for (NodeId v = 0; v < star.tree()->size(); ++v) {
      if (v != star.tree()->root() && transfer_into(star, h, v) != flux.at(v)) {
        return "realized transfer across the edge into " + star.tree()->name(v) + " differs";
      }
    }
    return std::nullopt;
  });
  r.passed = r.failures == 0 && r.cases >= 100;
  return r;
}

CriterionResult verify_feasibility_sentinel(std::size_t infeasible) {
  CriterionResult r = criterion(8, "feasibility sentinel");
  const auto start = std::chrono::steady_clock::now();
  std::size_t raised = 0;
  auto expect = [&](auto body) {
    ++r.cases;
    try {
      body();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kInfeasibleTransfer) {
        ++raised;
        return;
      }
    }
    ++r.failures;
  };
  auto finite_pair = []() {
    // r(1) -> u(1) -> l(tail 1), r -> m(tail 1)
    std::vector<NodeSpec> specs{{"r", Rational(1), {"u", "m"}, LeafKind::kInterior, {}},
                                {"u", Rational(1), {"l"}, LeafKind::kInterior, {}},
                                {"l", std::nullopt, {}, LeafKind::kEnd, ExtendedMass(Rational(1))},
                                {"m", std::nullopt, {}, LeafKind::kEnd, ExtendedMass(Rational(1))}};
    return MeasureState::declared(BalloonTree::make(std::move(specs), "r"));
  };
  // Boundary of the open interval.
  expect([] {
    (void)gauge_parameter(FeasibilityInterval{ExtendedMass(Rational(1)), ExtendedMass(Rational(4))}, Rational(-1));
  });
  expect([] {
    (void)gauge_parameter(FeasibilityInterval{ExtendedMass(Rational(2)), ExtendedMass(Rational(3))}, Rational(3));
  });
  // A charge on finite tails asks a finite region for more than it holds.
  expect([&] {
    const MeasureState mu = finite_pair();
    const TreePtr& t = mu.tree();
    EndCharge a = EndCharge::zero(t);
    a.set(t->id("l"), 5);
    a.set(t->id("m"), -5);
    const std::vector<NodeId> core{t->id("r"), t->id("u")};
    (void)balance_step(mu, Region::empty(t), Region(t, core), MoveWord::empty(mu), MoveWord::empty(mu), a);
  });
  // A finite balloon asked to give up more than its mass.
  expect([&] {
    const MeasureState mu = finite_pair();
    const TreePtr& t = mu.tree();
    EndCharge a = EndCharge::zero(t);
    a.set(t->id("l"), -3);
    a.set(t->id("m"), 3);
    const std::vector<NodeId> core{t->id("r"), t->id("u")};
    (void)balance_step(mu, Region::empty(t), Region(t, core), MoveWord::empty(mu), MoveWord::empty(mu), a);
  });
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.note = std::to_string(infeasible) + " on valid input, " + std::to_string(raised) + " doctored raised";
  r.passed = infeasible == 0 && raised >= 3 && r.failures == 0;
  return r;
}

CriterionResult verify_truncation(const VerifyConfig& config, std::size_t& infeasible) {
  CriterionResult r = criterion(9, "truncation stability");
  run_cases(r, std::max<std::size_t>(20, config.cases / 4), config.seed * 1000 + 9, infeasible,
            [&](Rng& rng) -> Failure {
    TreeShape shape = shape_of(config);
    shape.max_depth = std::min<std::size_t>(shape.max_depth, 4);
    shape.max_nodes = std::min<std::size_t>(shape.max_nodes, 40);
    const TreePtr tree = random_tree(rng, shape);
    const Refinement ref = refine(MeasureState::declared(tree), 2);
    const EndCharge a = random_charge(rng, ref.coarse);
    const FluxField coarse = apply_word(build_section(ref.coarse, a)).flux;
    const TreePtr& fine_tree = ref.fine.tree();
    const FluxField fine = apply_word(build_section(ref.fine, transfer_charge(a, fine_tree))).flux;
    for (NodeId v = 0; v < tree->size(); ++v) {
      if (v == tree->root()) {
        continue;
      }
      const std::string& name = tree->name(v);
      const NodeId edge = tree->is_end(v) ? fine_tree->id(name + "^0") : fine_tree->id(name);
      if (coarse.at(v) != fine.at(edge)) {
        return "flux into " + name + " changes under refinement";
      }
    }
    return std::nullopt;
  });
  r.passed = r.failures == 0 && r.cases >= 20;
  return r;
}

VerifyReport run_verify(const VerifyConfig& config) {
  VerifyReport report;
  std::size_t& bad = report.infeasible_on_valid;
  report.criteria.push_back(verify_section_roundtrip(config, bad));
  report.criteria.push_back(verify_homomorphism(config, bad));
  report.criteria.push_back(verify_j_algebra(config, bad));
  report.criteria.push_back(verify_flux_uniqueness(config, bad));
  report.criteria.push_back(verify_diagram(config, bad));
  report.criteria.push_back(verify_factorization(config, bad));
  report.criteria.push_back(verify_oracle(config, bad));
  CriterionResult truncation = verify_truncation(config, bad);
  report.criteria.push_back(verify_feasibility_sentinel(bad));
  report.criteria.push_back(std::move(truncation));
  return report;
}

}  // namespace endcharge
