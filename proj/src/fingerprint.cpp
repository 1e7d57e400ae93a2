#include "slpt/fingerprint.hpp"

namespace slpt {

namespace {

constexpr std::uint64_t kMod0 = (1ull << 61) - 1;  // Mersenne prime
constexpr std::uint64_t kMod1 = 2305843009213693921ull;  // prime < 2^61
constexpr std::uint64_t kBase0 = 1498212349106339ull;
constexpr std::uint64_t kBase1 = 734829134912117ull;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<__uint128_t>(a) * b) % m);
}
std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  a += b;
  if (a >= m) a -= m;
  return a;
}

}  // namespace

PrefixHasher::PrefixHasher(const Slp& slp, std::function<std::uint64_t(const TermSymbol&)> code)
    : slp_(&slp), code_(std::move(code)) {
  ValidationReport rep = require_valid(slp);
  lens_ = std::move(rep.lengths);
  lanes_[0] = {kMod0, kBase0, {}, {}};
  lanes_[1] = {kMod1, kBase1, {}, {}};
  for (Lane& lane : lanes_) {
    lane.h.assign(slp.nt_count(), 0);
    lane.pw.assign(slp.nt_count(), 1);
  }
  for (std::uint32_t a : rep.topo_order) {
    for (Lane& lane : lanes_) {
      std::uint64_t h = 0, pw = 1;
      for (const auto& item : slp_->rhs(a)) {
        if (const TermSymbol* t = std::get_if<TermSymbol>(&item)) {
          h = addmod(mulmod(h, lane.base, lane.mod), code_(*t) % lane.mod, lane.mod);
          pw = mulmod(pw, lane.base, lane.mod);
        } else {
          std::uint32_t id = std::get<NtRef>(item).id;
          h = addmod(mulmod(h, lane.pw[id], lane.mod), lane.h[id], lane.mod);
          pw = mulmod(pw, lane.pw[id], lane.mod);
        }
      }
      lane.h[a] = h;
      lane.pw[a] = pw;
    }
  }
}

std::pair<std::uint64_t, std::uint64_t> PrefixHasher::prefix_in(std::uint32_t node,
                                                                const BigInt& k, int li) const {
  // (hash, base^k) of val(node)[1..k]
  const Lane& lane = lanes_[li];
  std::uint64_t h = 0, pw = 1;
  BigInt rem = k;
  std::uint32_t cur = node;
  for (;;) {
    if (rem == 0) return {h, pw};
    bool descended = false;
    for (const auto& item : slp_->rhs(cur)) {
      if (const TermSymbol* t = std::get_if<TermSymbol>(&item)) {
        h = addmod(mulmod(h, lane.base, lane.mod), code_(*t) % lane.mod, lane.mod);
        pw = mulmod(pw, lane.base, lane.mod);
        rem -= 1;
        if (rem == 0) return {h, pw};
      } else {
        std::uint32_t id = std::get<NtRef>(item).id;
        if (rem >= lens_[id]) {
          h = addmod(mulmod(h, lane.pw[id], lane.mod), lane.h[id], lane.mod);
          pw = mulmod(pw, lane.pw[id], lane.mod);
          rem -= lens_[id];
          if (rem == 0) return {h, pw};
        } else {
          cur = id;
          descended = true;
          break;
        }
      }
    }
    if (!descended) return {h, pw};
  }
}

std::pair<std::uint64_t, std::uint64_t> PrefixHasher::prefix(const BigInt& k) const {
  if (k < 0 || k > length()) raise(Errc::OutOfRange, k.str());
  return {prefix_in(slp_->start(), k, 0).first, prefix_in(slp_->start(), k, 1).first};
}

BigInt common_prefix_length(const PrefixHasher& a, const PrefixHasher& b, const BigInt& max_i) {
  BigInt lo = 0, hi = max_i;
  if (hi > a.length()) hi = a.length();
  if (hi > b.length()) hi = b.length();
  while (lo < hi) {
    BigInt mid = (lo + hi + 1) / 2;
    if (a.prefix(mid) == b.prefix(mid))
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

}  // namespace slpt
