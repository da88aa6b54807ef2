#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "endcharge/balloon_tree.hpp"
#include "endcharge/end_charge.hpp"
#include "endcharge/measure.hpp"
#include "endcharge/pl1d_oracle.hpp"
#include "endcharge/proper_morphism.hpp"
#include "endcharge/transport.hpp"

namespace endcharge::json_io {

using Json = nlohmann::ordered_json;

// Readers throw Error(kParse) on schema violations and the validation
// errors of the underlying types otherwise.
TreePtr read_tree(const Json& j);
// Missing entries fall back to the tree's declared weights and tails.
MeasureState read_measure(const TreePtr& tree, const Json& j);
// Missing End leaves are zero.
EndCharge read_charge(const TreePtr& tree, const Json& j);
MoveWord read_word(const MeasureState& base, const Json& j);
TreeMorphism read_morphism(const Json& j);
// Tree JSON with a "star" header giving the ray count and depth.
RayStar read_star(const Json& j);

Json write_tree(const BalloonTree& tree);
Json write_measure(const MeasureState& mu);
Json write_charge(const EndCharge& c);
// Flat {leaf: value} object.
Json write_charge_values(const EndCharge& c);
Json write_word(const MoveWord& w);
Json write_morphism(const TreeMorphism& pi);
Json write_flux(const FluxField& flux);
Json write_plmap(const RayStar& star, const PLMap& h);

// Throws Error(kParse) on malformed JSON; std::ios_base::failure when the
// file cannot be read or written.
Json load_file(const std::filesystem::path& path);
void save_file(const std::filesystem::path& path, const Json& j);

}  // namespace endcharge::json_io
