#pragma once

#include <initializer_list>
#include <string>
#include <utility>

#include "endcharge/balloon_tree.hpp"
#include "endcharge/end_charge.hpp"
#include "endcharge/measure.hpp"
#include "endcharge/transport.hpp"

namespace endcharge::testing {

// r(4) with children u(2) -> l1 (inf), v(1) -> l2 (inf) and the End leaf
// l3 (tail 5, or inf when requested).
TreePtr reference_tree(bool finite_l3 = true);
MeasureState reference_measure(bool finite_l3 = true);
// [B(r->u,3), B(u->l1,3), B(v->l2,-3), B(r->v,-3)]
MoveWord reference_word();

Region region(const TreePtr& tree, std::initializer_list<const char*> names);
EndSet ends(const TreePtr& tree, std::initializer_list<const char*> names);
EndCharge charge(const TreePtr& tree, std::initializer_list<std::pair<const char*, int>> values);
BalloonMove balloon(const TreePtr& tree, const char* parent, const char* child, const Rational& amount);
Rational flux_into(const FluxField& flux, const char* node);

// Edge flux with zero divergence at every block and the given End leaf
// values, found by Gaussian elimination on the full incidence system.
FluxField kirchhoff_solve(const MeasureState& mu, const EndCharge& a);

}  // namespace endcharge::testing
