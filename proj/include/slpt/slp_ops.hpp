#pragma once

#include <vector>

#include "slpt/slp.hpp"

namespace slpt {

// Brute-force expansion; the oracle everything else is tested against.
// Throws ExpansionTooLarge when |val| exceeds limit.
std::vector<TermSymbol> expand(const Slp& slp, std::uint64_t limit);
std::vector<TermSymbol> expand_nt(const Slp& slp, std::uint32_t nt, std::uint64_t limit);

// Symbols of val(slp), sorted, deduplicated.
std::vector<TermSymbol> occurring_symbols(const Slp& slp);

BigInt count_occurrences(const Slp& slp, const SymbolPred& gamma);
BigInt select_occurrence(const Slp& slp, const SymbolPred& gamma, const BigInt& i);

// Per-nonterminal occurrence counts for one query symbol set, supporting the
// logarithmic-descent queries used all over the evaluators.
class GammaCounts {
 public:
  GammaCounts(const Slp& slp, SymbolPred gamma);

  const BigInt& total() const { return counts_[slp_->start()]; }
  const BigInt& length() const { return lens_[slp_->start()]; }
  // Occurrences among val[1..k]; k may exceed the length (clamped).
  BigInt count_prefix(const BigInt& k) const;
  // 1-based position of the i-th occurrence.
  BigInt select(const BigInt& i) const;

  const Slp& slp() const { return *slp_; }

 private:
  const Slp* slp_;
  SymbolPred gamma_;
  std::vector<BigInt> counts_;
  std::vector<BigInt> lens_;
};

// Random access into val(slp), 1-based.
TermSymbol symbol_at(const Slp& slp, const BigInt& pos);

// Flat right-hand-side item sequence expanding to val(nt)[lo:hi], referencing
// nonterminals of the given grammar. lo == hi+1 yields the empty sequence.
std::vector<RhsItem> substring_items(const GrammarBase& g, const std::vector<BigInt>& lens,
                                     std::uint32_t nt, const BigInt& lo, const BigInt& hi);

// SLP for val(slp)[i:j]; |result| in O(|slp|). Rejects empty slices.
Slp substring_slp(const Slp& slp, const BigInt& i, const BigInt& j);

Slp reverse_slp(const Slp& slp);

struct SlpOrWord {
  SlpOrWord(Slp s) : v(std::move(s)) {}
  SlpOrWord(std::vector<TermSymbol> w) : v(std::move(w)) {}
  std::variant<Slp, std::vector<TermSymbol>> v;
};

Slp concat_slp(const std::vector<SlpOrWord>& parts);

// Chomsky normal form: every production A -> a or A -> BC; value preserved,
// size increase bounded by a constant factor.
Slp normalize_cnf(const Slp& slp);

// Composition system to plain SLP with the same value. Cut rules are resolved
// by splicing derivation-path item sequences, O(depth) items per cut.
Slp eliminate_cuts(const CompositionSystem& cs);

// SLP producing sym repeated `count` times (count >= 1), O(bits) productions.
Slp power_slp(const TermSymbol& sym, const BigInt& count, const std::string& name_hint = "P");

}  // namespace slpt
