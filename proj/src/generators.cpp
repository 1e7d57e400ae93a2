#include "slpt/generators.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_map>

#include "slpt/slp_ops.hpp"
#include "slpt/transducer.hpp"
#include "slpt/tree_shape.hpp"

namespace slpt {

TermSymbol bit_symbol(int b) { return TermSymbol::ranked(b ? "1" : "0", 0); }
TermSymbol comb_internal_symbol(int b) { return TermSymbol::ranked(b ? "f1" : "f0", 2); }
TermSymbol dollar_symbol() { return TermSymbol::ranked("$", 0); }

namespace {

// Symbols interned to dense ints; ids >= first_nt are grammar nonterminals.
struct Interner {
  std::map<TermSymbol, int> ids;
  std::vector<TermSymbol> syms;
  int intern(const TermSymbol& s) {
    auto it = ids.find(s);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(syms.size());
    ids.emplace(s, id);
    syms.push_back(s);
    return id;
  }
};

Slp compress_bisection(const std::vector<TermSymbol>& w) {
  Interner in;
  std::vector<int> seq;
  seq.reserve(w.size());
  for (const auto& s : w) seq.push_back(in.intern(s));

  Slp out;
  std::map<std::vector<int>, std::uint32_t> memo;
  std::vector<std::int64_t> term_nt(in.syms.size(), -1);
  std::function<std::uint32_t(std::size_t, std::size_t)> build =
      [&](std::size_t lo, std::size_t len) -> std::uint32_t {
    if (len == 1) {
      int sym = seq[lo];
      if (term_nt[sym] < 0) {
        std::uint32_t id = out.fresh_nonterminal("L");
        out.set_production(id, {item_term(in.syms[sym])});
        term_nt[sym] = id;
      }
      return static_cast<std::uint32_t>(term_nt[sym]);
    }
    std::vector<int> key(seq.begin() + lo, seq.begin() + lo + len);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::size_t half = 1;
    while (half * 2 < len) half *= 2;
    std::uint32_t l = build(lo, half);
    std::uint32_t r = build(lo + half, len - half);
    std::uint32_t id = out.fresh_nonterminal("B");
    out.set_production(id, {item_nt(l), item_nt(r)});
    memo.emplace(std::move(key), id);
    return id;
  };
  out.set_start(build(0, seq.size()));
  return out;
}

Slp compress_pairing(const std::vector<TermSymbol>& w) {
  Interner in;
  std::vector<int> seq;
  seq.reserve(w.size());
  for (const auto& s : w) seq.push_back(in.intern(s));
  const int nterm = static_cast<int>(in.syms.size());

  std::vector<std::pair<int, int>> pairs;  // productions for ids >= nterm
  std::unordered_map<std::uint64_t, std::pair<std::size_t, std::size_t>> counts;
  auto key_of = [](int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
  };
  for (;;) {
    if (seq.size() < 2) break;
    // Non-overlapping digram counts, leftmost occurrence breaks ties.
    counts.clear();
    std::uint64_t prev = ~0ull;
    bool prev_counted = false;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      std::uint64_t d = key_of(seq[i], seq[i + 1]);
      // suppress overlap inside runs like aaaa
      if (prev_counted && d == prev) {
        prev_counted = false;
        prev = d;
        continue;
      }
      auto it = counts.try_emplace(d, std::make_pair(std::size_t(0), i)).first;
      it->second.first += 1;
      prev_counted = true;
      prev = d;
    }
    std::int64_t best = -1;
    std::size_t best_count = 1, best_first = 0;
    for (const auto& [d, cf] : counts) {
      if (cf.first > best_count || (cf.first == best_count && best >= 0 &&
                                    cf.second < best_first)) {
        best = static_cast<std::int64_t>(d);
        best_count = cf.first;
        best_first = cf.second;
      }
    }
    if (best < 0) break;
    int bfirst = static_cast<int>(static_cast<std::uint64_t>(best) >> 32);
    int bsecond = static_cast<int>(static_cast<std::uint64_t>(best) & 0xffffffffu);
    int fresh_id = nterm + static_cast<int>(pairs.size());
    pairs.push_back({bfirst, bsecond});
    std::vector<int> next;
    next.reserve(seq.size());
    for (std::size_t i = 0; i < seq.size();) {
      if (i + 1 < seq.size() && seq[i] == bfirst && seq[i + 1] == bsecond) {
        next.push_back(fresh_id);
        i += 2;
      } else {
        next.push_back(seq[i]);
        i += 1;
      }
    }
    seq.swap(next);
  }

  Slp out;
  std::vector<std::uint32_t> nt_of(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k)
    nt_of[k] = out.add_nonterminal("R" + std::to_string(k));
  auto item_of = [&](int id) {
    if (id < nterm) return item_term(in.syms[id]);
    return item_nt(nt_of[id - nterm]);
  };
  for (std::size_t k = 0; k < pairs.size(); ++k)
    out.set_production(nt_of[k], {item_of(pairs[k].first), item_of(pairs[k].second)});
  std::uint32_t s = out.fresh_nonterminal("S");
  std::vector<RhsItem> top;
  top.reserve(seq.size());
  for (int id : seq) top.push_back(item_of(id));
  out.set_production(s, std::move(top));
  out.set_start(s);
  return out;
}

void require_bits(const Slp& g) {
  for (const auto& s : occurring_symbols(g))
    if (!(s == bit_symbol(0)) && !(s == bit_symbol(1)))
      raise(Errc::WrongAlphabet, "expected a grammar over bits 0/1, found " + s.str());
}

}  // namespace

Slp compress(const std::vector<TermSymbol>& w, CompressAlgo algo) {
  if (w.empty()) raise(Errc::EmptyInput, "cannot compress the empty word");
  return algo == CompressAlgo::Bisection ? compress_bisection(w) : compress_pairing(w);
}

Slp comb_slp(const Slp& u, const Slp& v) {
  require_bits(u);
  require_bits(v);
  ValidationReport ru = require_valid(u);
  ValidationReport rv = require_valid(v);
  const BigInt& lu = ru.lengths[u.start()];
  const BigInt& lv = rv.lengths[v.start()];
  if (lu != lv) raise(Errc::LengthMismatch, lu.str() + " vs " + lv.str());
  if (lu == 0) raise(Errc::EmptyInput, "comb tree needs at least one spine symbol");
  FunctionalTransducer spine = FunctionalTransducer::homomorphism({
      {bit_symbol(0), {comb_internal_symbol(0)}},
      {bit_symbol(1), {comb_internal_symbol(1)}},
  });
  return concat_slp({apply_transducer(u, spine),
                     std::vector<TermSymbol>{dollar_symbol()},
                     reverse_slp(v)});
}

Slp phi_gap_tree_slp(const Slp& u, const Slp& v) {
  require_bits(u);
  require_bits(v);
  ValidationReport ru = require_valid(u);
  ValidationReport rv = require_valid(v);
  const BigInt& lu = ru.lengths[u.start()];
  const BigInt& lv = rv.lengths[v.start()];
  if (lu != lv) raise(Errc::LengthMismatch, lu.str() + " vs " + lv.str());
  if (lu == 0) raise(Errc::EmptyInput, "empty bit strings");
  TermSymbol f = TermSymbol::ranked("f", 2);
  TermSymbol a = TermSymbol::ranked("a", 0);
  FunctionalTransducer phi1 = FunctionalTransducer::homomorphism({
      {bit_symbol(0), {f}},
      {bit_symbol(1), {f, a, f}},
  });
  FunctionalTransducer phi2 = FunctionalTransducer::homomorphism({
      {bit_symbol(0), {a}},
      {bit_symbol(1), {f, a, a}},
  });
  return concat_slp({apply_transducer(reverse_slp(u), phi1),
                     std::vector<TermSymbol>{a},
                     apply_transducer(v, phi2)});
}

std::string bp_brute(const std::vector<TermSymbol>& preorder, std::size_t limit) {
  if (preorder.size() > limit) raise(Errc::TooLarge, std::to_string(preorder.size()));
  if (shape_of_word(preorder) != TreeShape{1, 0}) raise(Errc::NotATree, "bp of a non-tree");
  std::string out;
  out.reserve(2 * preorder.size());
  std::vector<int> stack;
  std::size_t i = 0;
  while (i < preorder.size() || !stack.empty()) {
    if (!stack.empty() && stack.back() == 0) {
      out += ')';
      stack.pop_back();
      continue;
    }
    if (!stack.empty()) stack.back() -= 1;
    out += '(';
    stack.push_back(preorder[i].rank());
    ++i;
  }
  return out;
}

}  // namespace slpt
