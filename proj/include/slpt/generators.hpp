#pragma once

#include <string>
#include <vector>

#include "slpt/slp.hpp"
#include "slpt/term_tree.hpp"

namespace slpt {

enum class CompressAlgo { Bisection, Pairing };

// Grammar compressor baselines. Bisection splits at power-of-two boundaries
// and hash-shares equal blocks (derivation depth <= ceil(log2 |w|) + 1);
// pairing replaces the most frequent digram repeatedly, leftmost digram wins
// ties.
Slp compress(const std::vector<TermSymbol>& w, CompressAlgo algo);

// Comb tree t(u,v) over {f0,f1:2, 0,1,$:0}: traversal f_{i1}..f_{im} $ rev(v).
Slp comb_slp(const Slp& u, const Slp& v);

// Full binary tree phi1(rev(u)) a phi2(v) from the BP separation construction
// (phi1: 0->f, 1->faf; phi2: 0->a, 1->faa).
Slp phi_gap_tree_slp(const Slp& u, const Slp& v);

// bp(t) by the recursive definition; explicit trees only.
std::string bp_brute(const std::vector<TermSymbol>& preorder, std::size_t limit = 1u << 22);

// Shared terminal constants for the constructions above.
TermSymbol bit_symbol(int b);           // "0"/"1", rank 0
TermSymbol comb_internal_symbol(int b); // f0/f1, rank 2
TermSymbol dollar_symbol();             // "$", rank 0

}  // namespace slpt
