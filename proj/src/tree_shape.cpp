#include "slpt/tree_shape.hpp"

namespace slpt {

TreeShape shape_of_word(const std::vector<TermSymbol>& w) {
  TreeShape acc = shape_identity();
  for (const auto& s : w) acc = shape_combine(acc, shape_of_symbol(s));
  return acc;
}

std::vector<TreeShape> compute_shapes(const Slp& slp) {
  ValidationReport rep = require_valid(slp);
  std::vector<TreeShape> shapes(slp.nt_count(), shape_identity());
  for (std::uint32_t a : rep.topo_order) {
    TreeShape acc = shape_identity();
    for (const auto& item : slp.rhs(a)) {
      if (const TermSymbol* t = std::get_if<TermSymbol>(&item))
        acc = shape_combine(acc, shape_of_symbol(*t));
      else
        acc = shape_combine(acc, shapes[std::get<NtRef>(item).id]);
    }
    shapes[a] = acc;
  }
  return shapes;
}

bool is_tree(const Slp& slp) {
  std::vector<TreeShape> shapes = compute_shapes(slp);
  return shapes[slp.start()] == TreeShape{1, 0};
}

}  // namespace slpt
