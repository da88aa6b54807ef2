#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "endcharge/balloon_tree.hpp"
#include "endcharge/end_charge.hpp"
#include "endcharge/measure.hpp"
#include "endcharge/rational.hpp"
#include "endcharge/transport.hpp"

namespace endcharge {

// Nested chain of compact, ancestor-closed regions. The last level holds
// every block, so its complement consists of End leaves only.
struct Exhaustion {
  std::vector<Region> levels;

  // Level d holds the non-End nodes of depth < d, for d = 1 .. max_depth + 1.
  static Exhaustion depth_cuts(const TreePtr& tree);
};

// Throws Error(kBadDecomposition).
void validate_exhaustion(const Exhaustion& ex, const TreePtr& tree);

// Open interval (-below, above) of admissible transfers into a balloon.
struct FeasibilityInterval {
  ExtendedMass below;
  ExtendedMass above;

  bool contains(const Rational& amount) const;
  std::string to_string() const;
};

// Edge flux forced by a charge: the charge of the ends below each edge.
// Throws Error(kInvalidCharge).
FluxField forced_flux(const MeasureState& mu, const EndCharge& a);

// (-mass(B), mass(N)). Throws Error(kBadDecomposition) when B and N overlap.
FeasibilityInterval feasibility_interval(const MeasureState& sigma, const Region& balloon, const Region& rest);

// Monotone gauge t in (-1, 1) -> transfer amount for the given interval.
Rational gauge_transfer(const FeasibilityInterval& interval, const Rational& t);
// Inverse of gauge_transfer. Throws Error(kInfeasibleTransfer) unless the
// target lies strictly inside the interval.
Rational gauge_parameter(const FeasibilityInterval& interval, const Rational& target);
Rational solve_balloon_parameter(const MeasureState& sigma, const Region& balloon, const Region& rest,
                                 const Rational& target);

struct TransferRecord {
  std::size_t level = 0;
  NodeId parent = 0;
  NodeId child = 0;
  Rational amount;
  Rational parameter;
};

struct SectionOptions {
  // Nodes no move may touch. Must be closed under taking descendants and
  // free of End leaves.
  std::vector<NodeId> frozen;
  std::vector<TransferRecord>* trace = nullptr;
};

// Word h starting from the final state of f, supported off inner, such that
// h.f agrees with g on outer and every component B of the complement of
// outer receives a(E_B) more than under g. Requires inner and outer compact
// and ancestor-closed with inner inside outer (Error(kBadDecomposition)),
// f and g agreeing on inner and each complement component A of inner
// receiving a(E_A) more under f than under g (Error(kPreconditionFailed)).
MoveWord balance_step(const MeasureState& mu, const Region& inner, const Region& outer, const MoveWord& f,
                      const MoveWord& g, const EndCharge& a, const SectionOptions& options = {});

// Measure-preserving word with charge a; the empty word when a = 0.
// Throws Error(kInvalidCharge).
MoveWord build_section(const MeasureState& mu, const EndCharge& a, const std::optional<Exhaustion>& ex = std::nullopt,
                       const SectionOptions& options = {});

struct Factorization {
  MoveWord kernel;
  EndCharge charge;
};

// w followed by the inverse of build_section(charge(w)). Throws Error(kCNotDefined).
Factorization factorize(const MoveWord& w);
// w followed by the inverse of build_section(tau * charge(w)); the charge is
// (1 - tau) * charge(w). Throws Error(kRange) for tau outside [0, 1].
MoveWord retract(const MoveWord& w, const Rational& tau);

}  // namespace endcharge
