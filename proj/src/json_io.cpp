#include "endcharge/json_io.hpp"

#include <fstream>
#include <sstream>

#include "endcharge/errors.hpp"

namespace endcharge::json_io {

namespace {

[[noreturn]] void bad(const std::string& message) { throw Error(ErrorCode::kParse, message); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    bad(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

std::string text(const Json& j, const std::string& what) {
  if (!j.is_string()) {
    bad(what + " must be a string");
  }
  return j.get<std::string>();
}

Rational rational(const Json& j, const std::string& what) {
  if (j.is_number_integer()) {
    return Rational(std::to_string(j.get<long long>()));
  }
  return parse_rational(text(j, what));
}

ExtendedMass extended(const Json& j, const std::string& what) {
  if (j.is_number_integer()) {
    return ExtendedMass::parse(std::to_string(j.get<long long>()));
  }
  return ExtendedMass::parse(text(j, what));
}

NodeId node(const TreePtr& tree, const Json& j) {
  const std::string name = text(j, "node reference");
  const auto id = tree->find(name);
  if (!id) {
    bad("unknown node " + name);
  }
  return *id;
}

std::string comp_name(std::size_t comp) { return comp == 0 ? "center" : "ray" + std::to_string(comp); }

}  // namespace

TreePtr read_tree(const Json& j) {
  const Json& nodes = field(j, "nodes");
  if (!nodes.is_array()) {
    bad("\"nodes\" must be an array");
  }
  std::vector<NodeSpec> specs;
  for (const Json& n : nodes) {
    NodeSpec spec;
    spec.id = text(field(n, "id"), "node id");
    if (n.contains("weight") && !n.at("weight").is_null()) {
      spec.weight = rational(n.at("weight"), "weight of " + spec.id);
    }
    if (n.contains("children")) {
      if (!n.at("children").is_array()) {
        bad("children of " + spec.id + " must be an array");
      }
      for (const Json& c : n.at("children")) {
        spec.children.push_back(text(c, "child id"));
      }
    }
    if (n.contains("leaf") && !n.at("leaf").is_null()) {
      const Json& leaf = n.at("leaf");
      const std::string kind = text(field(leaf, "kind"), "leaf kind");
      if (kind == "end") {
        spec.leaf = LeafKind::kEnd;
        spec.tail = extended(field(leaf, "tail"), "tail of " + spec.id);
      } else if (kind == "closed") {
        spec.leaf = LeafKind::kClosed;
      } else {
        bad("unknown leaf kind " + kind);
      }
    }
    specs.push_back(std::move(spec));
  }
  return BalloonTree::make(std::move(specs), text(field(j, "root"), "root"));
}

MeasureState read_measure(const TreePtr& tree, const Json& j) {
  const MeasureState declared = MeasureState::declared(tree);
  std::vector<Rational> blocks(tree->size());
  std::vector<ExtendedMass> tails(tree->size());
  for (NodeId v = 0; v < tree->size(); ++v) {
    if (tree->is_end(v)) {
      tails[v] = declared.tail(v);
    } else {
      blocks[v] = declared.block(v);
    }
  }
  if (!j.is_object()) {
    bad("measure must be an object");
  }
  if (j.contains("blocks")) {
    for (const auto& [name, value] : j.at("blocks").items()) {
      const NodeId v = node(tree, Json(name));
      if (tree->is_end(v)) {
        bad("End leaf " + name + " has no block mass");
      }
      blocks[v] = rational(value, "mass of " + name);
    }
  }
  if (j.contains("tails")) {
    for (const auto& [name, value] : j.at("tails").items()) {
      const NodeId v = node(tree, Json(name));
      if (!tree->is_end(v)) {
        bad(name + " is not an End leaf");
      }
      tails[v] = extended(value, "tail of " + name);
    }
  }
  return MeasureState(tree, std::move(blocks), std::move(tails));
}

EndCharge read_charge(const TreePtr& tree, const Json& j) {
  EndCharge c = EndCharge::zero(tree);
  for (const auto& [name, value] : field(j, "values").items()) {
    const NodeId v = node(tree, Json(name));
    if (!tree->is_end(v)) {
      bad(name + " is not an End leaf");
    }
    c.set(v, rational(value, "charge at " + name));
  }
  return c;
}

MoveWord read_word(const MeasureState& base, const Json& j) {
  const TreePtr& tree = base.tree();
  const Json& moves = field(j, "moves");
  if (!moves.is_array()) {
    bad("\"moves\" must be an array");
  }
  MoveWord w = MoveWord::empty(base);
  for (const Json& m : moves) {
    if (m.contains("balloon")) {
      const Json& b = m.at("balloon");
      const Json& edge = field(b, "edge");
      if (!edge.is_array() || edge.size() != 2) {
        bad("balloon edge must be a [parent, child] pair");
      }
      w.moves.push_back(BalloonMove{node(tree, edge[0]), node(tree, edge[1]), rational(field(b, "amount"), "amount")});
    } else if (m.contains("rearrange")) {
      const Json& r = m.at("rearrange");
      Rearrange move;
      const Json& masses = field(r, "masses");
      for (const Json& s : field(r, "support")) {
        const std::string name = text(s, "support node");
        move.support.push_back(node(tree, s));
        if (!masses.contains(name)) {
          bad("rearrange gives no mass for " + name);
        }
        move.masses.push_back(rational(masses.at(name), "mass of " + name));
      }
      w.moves.push_back(std::move(move));
    } else {
      bad("move must be a balloon or a rearrange");
    }
  }
  return w;
}

TreeMorphism read_morphism(const Json& j) {
  TreePtr source = read_tree(field(j, "source"));
  TreePtr target = read_tree(field(j, "target"));
  std::map<std::string, std::string> map;
  for (const auto& [from, to] : field(j, "map").items()) {
    map[from] = text(to, "image of " + from);
  }
  return TreeMorphism::from_names(std::move(source), std::move(target), map);
}

RayStar read_star(const Json& j) {
  const TreePtr tree = read_tree(j);
  RayStar star = RayStar::from_measure(MeasureState::declared(tree));
  if (j.contains("star")) {
    const Json& header = j.at("star");
    if (header.contains("rays") && header.at("rays").get<std::size_t>() != star.ray_count()) {
      throw Error(ErrorCode::kNotAStar, "header ray count does not match the tree");
    }
    if (header.contains("depth") && header.at("depth").get<std::size_t>() != star.max_depth()) {
      throw Error(ErrorCode::kNotAStar, "header depth does not match the tree");
    }
  }
  return star;
}

Json write_tree(const BalloonTree& tree) {
  Json nodes = Json::array();
  for (NodeId v = 0; v < tree.size(); ++v) {
    const NodeSpec& spec = tree.specs()[v];
    Json n;
    n["id"] = spec.id;
    n["weight"] = spec.weight ? Json(format_rational(*spec.weight)) : Json(nullptr);
    Json children = Json::array();
    for (NodeId c : tree.children(v)) {
      children.push_back(tree.name(c));
    }
    n["children"] = children;
    switch (spec.leaf) {
      case LeafKind::kEnd: n["leaf"] = Json{{"kind", "end"}, {"tail", spec.tail.to_string()}}; break;
      case LeafKind::kClosed: n["leaf"] = Json{{"kind", "closed"}}; break;
      case LeafKind::kInterior: n["leaf"] = nullptr; break;
    }
    nodes.push_back(n);
  }
  return Json{{"root", tree.name(tree.root())}, {"nodes", nodes}};
}

Json write_measure(const MeasureState& mu) {
  const BalloonTree& tree = *mu.tree();
  Json blocks = Json::object();
  Json tails = Json::object();
  for (NodeId v : tree.preorder()) {
    if (tree.is_end(v)) {
      tails[tree.name(v)] = mu.tail(v).to_string();
    } else {
      blocks[tree.name(v)] = format_rational(mu.block(v));
    }
  }
  return Json{{"blocks", blocks}, {"tails", tails}};
}

Json write_charge_values(const EndCharge& c) {
  Json values = Json::object();
  for (NodeId leaf : c.tree()->end_leaves()) {
    values[c.tree()->name(leaf)] = format_rational(c.value(leaf));
  }
  return values;
}

Json write_charge(const EndCharge& c) { return Json{{"values", write_charge_values(c)}}; }

Json write_word(const MoveWord& w) {
  const BalloonTree& tree = *w.tree();
  Json moves = Json::array();
  for (const Move& m : w.moves) {
    if (const auto* b = std::get_if<BalloonMove>(&m)) {
      moves.push_back(Json{{"balloon",
                            {{"edge", {tree.name(b->parent), tree.name(b->child)}},
                             {"amount", format_rational(b->amount)}}}});
    } else {
      const auto& r = std::get<Rearrange>(m);
      Json support = Json::array();
      Json masses = Json::object();
      for (std::size_t i = 0; i < r.support.size(); ++i) {
        support.push_back(tree.name(r.support[i]));
        masses[tree.name(r.support[i])] = format_rational(r.masses[i]);
      }
      moves.push_back(Json{{"rearrange", {{"support", support}, {"masses", masses}}}});
    }
  }
  return Json{{"moves", moves}};
}

Json write_morphism(const TreeMorphism& pi) {
  Json map = Json::object();
  for (NodeId v : pi.source()->preorder()) {
    map[pi.source()->name(v)] = pi.target()->name(pi.image(v));
  }
  return Json{{"source", write_tree(*pi.source())}, {"target", write_tree(*pi.target())}, {"map", map}};
}

Json write_flux(const FluxField& flux) {
  const BalloonTree& tree = *flux.tree();
  Json out = Json::object();
  for (NodeId v : tree.preorder()) {
    if (const auto p = tree.parent(v)) {
      out[tree.name(*p) + "->" + tree.name(v)] = format_rational(flux.at(v));
    }
  }
  return out;
}

Json write_plmap(const RayStar& star, const PLMap& h) {
  Json pieces = Json::array();
  for (const auto& p : h.pieces()) {
    pieces.push_back(Json{{"from", comp_name(p.src)},
                          {"lo", format_rational(p.span.lo)},
                          {"hi", p.span.hi ? Json(format_rational(*p.span.hi)) : Json(nullptr)},
                          {"to", comp_name(p.dst)},
                          {"shift", format_rational(p.shift)},
                          {"slope", "1"}});
  }
  Json translations = Json::object();
  for (std::size_t i = 0; i < star.ray_count(); ++i) {
    const auto a = h.eventual_translation(i + 1);
    translations[star.tree()->name(star.end_leaf(i))] = a ? Json(format_rational(*a)) : Json(nullptr);
  }
  return Json{{"pieces", pieces}, {"eventual_translation", translations}};
}

Json load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::ios_base::failure("cannot read " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const nlohmann::json::exception& e) {
    bad(path.string() + ": " + e.what());
  }
}

void save_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) {
    throw std::ios_base::failure("cannot write " + path.string());
  }
  out << j.dump(2) << "\n";
  if (!out) {
    throw std::ios_base::failure("cannot write " + path.string());
  }
}

}  // namespace endcharge::json_io
