#include "support/fixtures.hpp"

#include <stdexcept>
#include <vector>

namespace endcharge::testing {

TreePtr reference_tree(bool finite_l3) {
  std::vector<NodeSpec> specs{
      {"r", Rational(4), {"u", "v", "l3"}, LeafKind::kInterior, {}},
      {"u", Rational(2), {"l1"}, LeafKind::kInterior, {}},
      {"v", Rational(1), {"l2"}, LeafKind::kInterior, {}},
      {"l1", std::nullopt, {}, LeafKind::kEnd, ExtendedMass::infinity()},
      {"l2", std::nullopt, {}, LeafKind::kEnd, ExtendedMass::infinity()},
      {"l3", std::nullopt, {}, LeafKind::kEnd,
       finite_l3 ? ExtendedMass(Rational(5)) : ExtendedMass::infinity()},
  };
  return BalloonTree::make(std::move(specs), "r");
}

MeasureState reference_measure(bool finite_l3) { return MeasureState::declared(reference_tree(finite_l3)); }

MoveWord reference_word() {
  const MeasureState mu = reference_measure();
  const TreePtr& t = mu.tree();
  return MoveWord{{balloon(t, "r", "u", 3), balloon(t, "u", "l1", 3), balloon(t, "v", "l2", -3),
                   balloon(t, "r", "v", -3)},
                  mu};
}

Region region(const TreePtr& tree, std::initializer_list<const char*> names) {
  std::vector<NodeId> ids;
  for (const char* n : names) {
    ids.push_back(tree->id(n));
  }
  return Region(tree, ids);
}

EndSet ends(const TreePtr& tree, std::initializer_list<const char*> names) {
  std::vector<NodeId> ids;
  for (const char* n : names) {
    ids.push_back(tree->id(n));
  }
  return EndSet(tree, ids);
}

EndCharge charge(const TreePtr& tree, std::initializer_list<std::pair<const char*, int>> values) {
  EndCharge c = EndCharge::zero(tree);
  for (const auto& [name, v] : values) {
    c.set(tree->id(name), v);
  }
  return c;
}

BalloonMove balloon(const TreePtr& tree, const char* parent, const char* child, const Rational& amount) {
  return BalloonMove{tree->id(parent), tree->id(child), amount};
}

Rational flux_into(const FluxField& flux, const char* node) { return flux.at(flux.tree()->id(node)); }

FluxField kirchhoff_solve(const MeasureState& mu, const EndCharge& a) {
  const BalloonTree& tree = *mu.tree();
  // Unknown k is the flux on the edge into edges[k].
  std::vector<NodeId> edges;
  std::vector<long> column(tree.size(), -1);
  for (NodeId v = 0; v < tree.size(); ++v) {
    if (tree.parent(v)) {
      column[v] = static_cast<long>(edges.size());
      edges.push_back(v);
    }
  }
  const std::size_t n = edges.size();
  std::vector<std::vector<Rational>> rows;
  for (NodeId v = 0; v < tree.size(); ++v) {
    std::vector<Rational> row(n + 1);
    if (tree.is_end(v)) {
      row[column[v]] = 1;
      row[n] = a.value(v);
    } else {
      if (column[v] >= 0) {
        row[column[v]] = 1;
      }
      for (NodeId c : tree.children(v)) {
        row[column[c]] = -1;
      }
    }
    rows.push_back(std::move(row));
  }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col] == 0) {
      ++pivot;
    }
    if (pivot == rows.size()) {
      throw std::runtime_error("Kirchhoff system is singular");
    }
    std::swap(rows[rank], rows[pivot]);
    const Rational lead = rows[rank][col];
    for (Rational& x : rows[rank]) {
      x /= lead;
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col] == 0) {
        continue;
      }
      const Rational factor = rows[r][col];
      for (std::size_t k = col; k <= n; ++k) {
        rows[r][k] -= factor * rows[rank][k];
      }
    }
    ++rank;
  }
  for (std::size_t r = rank; r < rows.size(); ++r) {
    if (rows[r][n] != 0) {
      throw std::runtime_error("Kirchhoff system is inconsistent");
    }
  }
  FluxField flux = FluxField::zero(mu.tree());
  for (std::size_t k = 0; k < n; ++k) {
    flux.add(edges[k], rows[k][n]);
  }
  return flux;
}

}  // namespace endcharge::testing
