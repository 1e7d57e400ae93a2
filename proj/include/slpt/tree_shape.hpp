#pragma once

#include <vector>

#include "slpt/slp.hpp"

namespace slpt {

// c(w) = (number of leading full trees, gaps of the trailing fragment).
// Forms a monoid under shape_combine with identity (0,0); (0,0) is attained
// exactly by the empty word.
struct TreeShape {
  BigInt full;
  BigInt gaps;

  friend bool operator==(const TreeShape& a, const TreeShape& b) {
    return a.full == b.full && a.gaps == b.gaps;
  }
  friend bool operator!=(const TreeShape& a, const TreeShape& b) { return !(a == b); }
  std::string str() const { return "(" + full.str() + "," + gaps.str() + ")"; }
};

inline TreeShape shape_identity() { return {0, 0}; }

inline TreeShape shape_of_symbol(const TermSymbol& f) {
  int n = f.rank();
  if (n == 0) return {1, 0};
  return {0, n};
}

inline TreeShape shape_combine(const TreeShape& b, const TreeShape& c) {
  if (b.gaps <= c.full) {
    BigInt full = b.full + c.full - (b.gaps > 1 ? b.gaps : BigInt(1)) + 1;
    return {full, c.gaps};
  }
  BigInt gaps = c.gaps + b.gaps - c.full - (c.gaps < 1 ? BigInt(0) : BigInt(1));
  return {b.full, gaps};
}

TreeShape shape_of_word(const std::vector<TermSymbol>& w);

// shape(A) = c(val(A)) for every nonterminal, one O(|slp|) fold.
std::vector<TreeShape> compute_shapes(const Slp& slp);

// val(slp) in T(F)?  Linear in |slp|.
bool is_tree(const Slp& slp);

inline void require_tree(const Slp& slp) {
  if (!is_tree(slp)) raise(Errc::NotATree, slp.nt_name(slp.start()));
}

}  // namespace slpt
