#pragma once

#include <optional>
#include <vector>

#include "slpt/slp.hpp"
#include "slpt/slp_ops.hpp"
#include "slpt/term_tree.hpp"
#include "slpt/tree_shape.hpp"

namespace slpt {

// Parenthesis SLP with per-nonterminal excess summaries. Positions are
// 1-based; excess(k) = #open - #close over val[1..k].
class BpSlp {
 public:
  static const TermSymbol& open_sym();
  static const TermSymbol& close_sym();

  explicit BpSlp(Slp grammar);

  const Slp& grammar() const { return g_; }
  const BigInt& length() const { return len_[g_.start()]; }
  bool balanced() const;

  bool is_open_at(const BigInt& k) const;
  BigInt rank_close(const BigInt& k) const;  // closes among val[1..k], k clamped
  BigInt rank_open(const BigInt& k) const { return (k < 0 ? BigInt(0) : k) - rank_close(k); }
  BigInt select_close(const BigInt& i) const;
  BigInt select_open(const BigInt& i) const;
  BigInt excess(const BigInt& k) const { return rank_open(k) - rank_close(k); }

  BigInt findclose(const BigInt& k) const;
  BigInt findopen(const BigInt& k) const;
  // Leftmost position in [k, j] with minimal prefix excess.
  BigInt rmqi(const BigInt& k, const BigInt& j) const;

  // First position > k with prefix excess equal to target; requires
  // target < excess(k). Throws OutOfRange when no such position exists.
  BigInt fwd_search(const BigInt& k, const BigInt& target) const;
  // Last position in [0, k-1] with prefix excess equal to target, or -1.
  BigInt bwd_search(const BigInt& k, const BigInt& target) const;

 private:
  struct Stats {
    BigInt len;
    BigInt close;
    BigInt total;                  // opens - closes
    std::optional<BigInt> minp;    // min prefix excess over nonempty prefixes
  };
  Stats stats_of(const RhsItem& item) const;

  // value-only min over local range [lo, hi] of node, entering excess e
  BigInt range_min(std::uint32_t node, const BigInt& lo, const BigInt& hi,
                   const BigInt& e) const;
  // leftmost local position in [lo, hi] attaining value m (prefix excess)
  BigInt leftmost_at_min(std::uint32_t node, const BigInt& lo, const BigInt& hi,
                         const BigInt& e, const BigInt& m) const;

  std::optional<BigInt> fwd_in(std::uint32_t node, const BigInt& from_local,
                               const BigInt& e_at_from, const BigInt& target) const;
  BigInt fwd_full(std::uint32_t node, const BigInt& e_before, const BigInt& target) const;
  std::optional<BigInt> bwd_in(std::uint32_t node, const BigInt& upto_local,
                               const BigInt& e_at_upto, const BigInt& target) const;
  std::optional<BigInt> bwd_full(std::uint32_t node, const BigInt& e_after,
                                 const BigInt& target) const;

  Slp g_;
  std::vector<BigInt> len_;
  std::vector<BigInt> close_;
  std::vector<BigInt> total_;
  std::vector<std::optional<BigInt>> minp_;
};

// DFUDS image of a traversal grammar: each rank-d symbol becomes (^d ) and a
// single open is prepended; len = 2N.
Slp dfuds_grammar(const Slp& tree);

// Navigation index over an SLP-compressed tree. Nodes are preorder positions
// 1..N. Queries run in time proportional to grammar depth.
class DfudsIndex {
 public:
  explicit DfudsIndex(Slp tree);

  const Slp& tree() const { return tree_; }
  const BpSlp& bp() const { return bp_; }
  const BigInt& node_count() const { return n_; }

  BigInt parent(const BigInt& i) const;
  BigInt kth_child(const BigInt& i, const BigInt& k) const;
  BigInt child_rank(const BigInt& i) const;
  BigInt subtree_size(const BigInt& i) const;
  BigInt lca(const BigInt& i, const BigInt& j) const;
  TermSymbol label_at(const BigInt& i) const;
  BigInt degree(const BigInt& i) const;
  bool is_ancestor(const BigInt& i, const BigInt& j) const;  // i ancestor-or-self of j

  // Does the subtree rooted at i match the pattern (parameters match whole
  // subtrees, each parameter used at most once)?
  bool subtree_matches(const BigInt& i, const TermTree& pattern) const;

  // Encoding start of node i in the DFUDS string.
  BigInt pos_of_node(const BigInt& i) const;

 private:
  void check_node(const BigInt& i) const;

  Slp tree_;
  std::vector<BigInt> tree_lens_;
  BpSlp bp_;
  BigInt n_;
};

inline DfudsIndex dfuds_slp(const Slp& tree) { return DfudsIndex(tree); }

}  // namespace slpt
