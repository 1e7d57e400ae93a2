#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "slpt/slp.hpp"

namespace slpt {

// Karp-Rabin prefix fingerprints over an SLP, two independent modular lanes.
// Supports O(depth)-time prefix hashes at arbitrary (big) positions; used for
// the binary-searched prefix comparison in the Boolean evaluator. Symbol
// codes must be collision-free across the grammars being compared.
class PrefixHasher {
 public:
  PrefixHasher(const Slp& slp, std::function<std::uint64_t(const TermSymbol&)> code);

  std::pair<std::uint64_t, std::uint64_t> prefix(const BigInt& k) const;
  const BigInt& length() const { return lens_[slp_->start()]; }

 private:
  struct Lane {
    std::uint64_t mod;
    std::uint64_t base;
    std::vector<std::uint64_t> h;   // hash of val(A)
    std::vector<std::uint64_t> pw;  // base^{len(A)} mod mod
  };
  std::pair<std::uint64_t, std::uint64_t> prefix_in(std::uint32_t node, const BigInt& k,
                                                    int lane) const;

  const Slp* slp_;
  std::function<std::uint64_t(const TermSymbol&)> code_;
  std::vector<BigInt> lens_;
  Lane lanes_[2];
};

// Largest i in [0, max_i] such that the length-i prefixes of a and b hash
// equal on both lanes (prefix equality is monotone, so binary search applies).
BigInt common_prefix_length(const PrefixHasher& a, const PrefixHasher& b, const BigInt& max_i);

}  // namespace slpt
