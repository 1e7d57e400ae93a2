#include "slpt/slp_ops.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace slpt {

namespace {

BigInt item_len(const std::vector<BigInt>& lens, const RhsItem& item) {
  if (std::holds_alternative<TermSymbol>(item)) return 1;
  if (const NtRef* r = std::get_if<NtRef>(&item)) return lens[r->id];
  const Cut& c = std::get<Cut>(item);
  return c.hi - c.lo + 1;
}

}  // namespace

std::vector<TermSymbol> expand_nt(const Slp& slp, std::uint32_t nt, std::uint64_t limit) {
  ValidationReport rep = require_valid(slp);
  if (rep.lengths[nt] > BigInt(limit))
    raise(Errc::ExpansionTooLarge, rep.lengths[nt].str());
  std::vector<TermSymbol> out;
  out.reserve(static_cast<std::size_t>(rep.lengths[nt]));
  // Explicit stack of (nonterminal, item index); avoids deep recursion.
  std::vector<std::pair<std::uint32_t, std::size_t>> stack{{nt, 0}};
  while (!stack.empty()) {
    auto& [node, idx] = stack.back();
    const auto& items = slp.rhs(node);
    if (idx >= items.size()) {
      stack.pop_back();
      continue;
    }
    const RhsItem& item = items[idx++];
    if (const TermSymbol* t = std::get_if<TermSymbol>(&item))
      out.push_back(*t);
    else
      stack.push_back({std::get<NtRef>(item).id, 0});
  }
  return out;
}

std::vector<TermSymbol> expand(const Slp& slp, std::uint64_t limit) {
  require_valid(slp);
  return expand_nt(slp, slp.start(), limit);
}

std::vector<TermSymbol> occurring_symbols(const Slp& slp) {
  require_valid(slp);
  // Every terminal in a production reachable from the start occurs in the
  // value: val(A) is a factor of val(S) for reachable A.
  std::vector<bool> seen(slp.nt_count(), false);
  std::vector<std::uint32_t> stack{slp.start()};
  seen[slp.start()] = true;
  std::vector<TermSymbol> out;
  while (!stack.empty()) {
    std::uint32_t node = stack.back();
    stack.pop_back();
    for (const auto& item : slp.rhs(node)) {
      if (const TermSymbol* t = std::get_if<TermSymbol>(&item)) {
        out.push_back(*t);
      } else {
        std::uint32_t id = std::get<NtRef>(item).id;
        if (!seen[id]) {
          seen[id] = true;
          stack.push_back(id);
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

GammaCounts::GammaCounts(const Slp& slp, SymbolPred gamma)
    : slp_(&slp), gamma_(std::move(gamma)) {
  ValidationReport rep = require_valid(slp);
  lens_ = std::move(rep.lengths);
  counts_.assign(slp.nt_count(), BigInt(0));
  for (std::uint32_t a : rep.topo_order) {
    BigInt c = 0;
    for (const auto& item : slp.rhs(a)) {
      if (const TermSymbol* t = std::get_if<TermSymbol>(&item)) {
        if (gamma_(*t)) c += 1;
      } else {
        c += counts_[std::get<NtRef>(item).id];
      }
    }
    counts_[a] = c;
  }
}

BigInt GammaCounts::count_prefix(const BigInt& k) const {
  if (k <= 0) return 0;
  BigInt rem = k;
  BigInt acc = 0;
  std::uint32_t node = slp_->start();
  if (rem >= lens_[node]) return counts_[node];
  for (;;) {
    const auto& items = slp_->rhs(node);
    bool descended = false;
    for (const auto& item : items) {
      if (const TermSymbol* t = std::get_if<TermSymbol>(&item)) {
        if (rem >= 1) {
          if (gamma_(*t)) acc += 1;
          rem -= 1;
          if (rem == 0) return acc;
        } else {
          return acc;
        }
      } else {
        std::uint32_t id = std::get<NtRef>(item).id;
        if (rem >= lens_[id]) {
          acc += counts_[id];
          rem -= lens_[id];
          if (rem == 0) return acc;
        } else {
          node = id;
          descended = true;
          break;
        }
      }
    }
    if (!descended) return acc;
  }
}

BigInt GammaCounts::select(const BigInt& i) const {
  if (i < 1 || i > total()) raise(Errc::NotEnoughOccurrences, i.str());
  BigInt rem = i;
  BigInt pos = 0;
  std::uint32_t node = slp_->start();
  for (;;) {
    const auto& items = slp_->rhs(node);
    bool descended = false;
    for (const auto& item : items) {
      if (const TermSymbol* t = std::get_if<TermSymbol>(&item)) {
        if (gamma_(*t)) {
          if (rem == 1) return pos + 1;
          rem -= 1;
        }
        pos += 1;
      } else {
        std::uint32_t id = std::get<NtRef>(item).id;
        if (rem <= counts_[id]) {
          node = id;
          descended = true;
          break;
        }
        rem -= counts_[id];
        pos += lens_[id];
      }
    }
    if (!descended) raise(Errc::NotEnoughOccurrences, i.str());
  }
}

BigInt count_occurrences(const Slp& slp, const SymbolPred& gamma) {
  return GammaCounts(slp, gamma).total();
}

BigInt select_occurrence(const Slp& slp, const SymbolPred& gamma, const BigInt& i) {
  return GammaCounts(slp, gamma).select(i);
}

TermSymbol symbol_at(const Slp& slp, const BigInt& pos) {
  ValidationReport rep = require_valid(slp);
  if (pos < 1 || pos > rep.lengths[slp.start()]) raise(Errc::OutOfRange, pos.str());
  BigInt rem = pos;
  std::uint32_t node = slp.start();
  for (;;) {
    for (const auto& item : slp.rhs(node)) {
      if (const TermSymbol* t = std::get_if<TermSymbol>(&item)) {
        if (rem == 1) return *t;
        rem -= 1;
      } else {
        std::uint32_t id = std::get<NtRef>(item).id;
        if (rem <= rep.lengths[id]) {
          node = id;
          break;
        }
        rem -= rep.lengths[id];
      }
    }
  }
}

std::vector<RhsItem> substring_items(const GrammarBase& g, const std::vector<BigInt>& lens,
                                     std::uint32_t nt, const BigInt& lo, const BigInt& hi) {
  std::vector<RhsItem> out;
  if (lo > hi) return out;
  // Recursion only enters partially covered items: at most two per level.
  std::function<void(std::uint32_t, const BigInt&, const BigInt&)> walk =
      [&](std::uint32_t node, const BigInt& a, const BigInt& b) {
        BigInt off = 0;
        for (const auto& item : g.rhs(node)) {
          BigInt l = item_len(lens, item);
          if (off >= b) break;
          BigInt lo_l = a - off;  // local 1-based range within this item
          BigInt hi_l = b - off;
          off += l;
          if (hi_l < 1 || lo_l > l) continue;
          if (lo_l < 1) lo_l = 1;
          if (hi_l > l) hi_l = l;
          if (lo_l == 1 && hi_l == l) {
            out.push_back(item);
          } else if (const NtRef* r = std::get_if<NtRef>(&item)) {
            walk(r->id, lo_l, hi_l);
          } else {
            // Partial range of a cut item: shift into the referenced value.
            const Cut& c = std::get<Cut>(item);
            walk(c.id, c.lo + lo_l - 1, c.lo + hi_l - 1);
          }
        }
      };
  walk(nt, lo, hi);
  return out;
}

Slp substring_slp(const Slp& slp, const BigInt& i, const BigInt& j) {
  ValidationReport rep = require_valid(slp);
  const BigInt& n = rep.lengths[slp.start()];
  if (i < 1 || j > n || i > j)
    raise(Errc::OutOfRange, "[" + i.str() + ":" + j.str() + "] of length " + n.str());
  Slp out;
  for (std::uint32_t id = 0; id < slp.nt_count(); ++id) out.add_nonterminal(slp.nt_name(id));
  for (std::uint32_t id = 0; id < slp.nt_count(); ++id) out.set_production(id, slp.rhs(id));
  std::uint32_t s = out.fresh_nonterminal("CUT");
  out.set_production(s, substring_items(slp, rep.lengths, slp.start(), i, j));
  out.set_start(s);
  return out;
}

Slp reverse_slp(const Slp& slp) {
  require_valid(slp);
  Slp out;
  for (std::uint32_t id = 0; id < slp.nt_count(); ++id) out.add_nonterminal(slp.nt_name(id));
  for (std::uint32_t id = 0; id < slp.nt_count(); ++id) {
    std::vector<RhsItem> items = slp.rhs(id);
    std::reverse(items.begin(), items.end());
    out.set_production(id, std::move(items));
  }
  out.set_start(slp.start());
  return out;
}

Slp concat_slp(const std::vector<SlpOrWord>& parts) {
  Slp out;
  std::vector<RhsItem> start_items;
  for (const auto& part : parts) {
    if (const Slp* s = std::get_if<Slp>(&part.v)) {
      require_valid(*s);
      std::vector<std::uint32_t> remap(s->nt_count());
      for (std::uint32_t id = 0; id < s->nt_count(); ++id)
        remap[id] = out.fresh_nonterminal(s->nt_name(id));
      for (std::uint32_t id = 0; id < s->nt_count(); ++id) {
        std::vector<RhsItem> items = s->rhs(id);
        for (auto& item : items)
          if (NtRef* r = std::get_if<NtRef>(&item)) r->id = remap[r->id];
        out.set_production(remap[id], std::move(items));
      }
      start_items.push_back(item_nt(remap[s->start()]));
    } else {
      for (const auto& sym : std::get<std::vector<TermSymbol>>(part.v))
        start_items.push_back(item_term(sym));
    }
  }
  std::uint32_t s = out.fresh_nonterminal("CAT");
  out.set_production(s, std::move(start_items));
  out.set_start(s);
  return out;
}

Slp normalize_cnf(const Slp& slp) {
  ValidationReport rep = require_valid(slp);
  if (rep.lengths[slp.start()] == 0) raise(Errc::EmptyValue, slp.nt_name(slp.start()));

  Slp out;
  // Keep original names for surviving nonterminals so grammars stay readable.
  std::vector<std::uint32_t> own(slp.nt_count(), 0);
  for (std::uint32_t id = 0; id < slp.nt_count(); ++id)
    own[id] = out.fresh_nonterminal(slp.nt_name(id));

  std::map<TermSymbol, std::uint32_t> term_nts;
  auto term_nt = [&](const TermSymbol& sym) {
    auto it = term_nts.find(sym);
    if (it != term_nts.end()) return it->second;
    std::uint32_t id = out.fresh_nonterminal("T");
    out.set_production(id, {item_term(sym)});
    term_nts.emplace(sym, id);
    return id;
  };

  // repr[a]: the output nonterminal a resolves to (chains collapse).
  std::vector<std::uint32_t> repr(slp.nt_count(), 0);
  for (std::uint32_t a : rep.topo_order) {
    if (rep.lengths[a] == 0) continue;
    // Drop empty-value items; lift embedded terminals when the rhs is longer
    // than one item.
    std::vector<std::uint32_t> seq;
    std::size_t effective = 0;
    for (const auto& item : slp.rhs(a)) {
      if (const NtRef* r = std::get_if<NtRef>(&item)) {
        if (rep.lengths[r->id] > 0) ++effective;
      } else {
        ++effective;
      }
    }
    bool single = effective == 1;
    const TermSymbol* single_term = nullptr;
    for (const auto& item : slp.rhs(a)) {
      if (const TermSymbol* t = std::get_if<TermSymbol>(&item)) {
        if (single) {
          single_term = t;
        } else {
          seq.push_back(term_nt(*t));
        }
      } else {
        std::uint32_t id = std::get<NtRef>(item).id;
        if (rep.lengths[id] == 0) continue;
        seq.push_back(repr[id]);
      }
    }
    if (single && single_term != nullptr) {
      out.set_production(own[a], {item_term(*single_term)});
      repr[a] = own[a];
      continue;
    }
    if (seq.size() == 1) {
      // Chain production: collapse onto the referenced nonterminal.
      repr[a] = seq[0];
      continue;
    }
    // Left fold into binary productions.
    std::uint32_t acc = seq[0];
    for (std::size_t k = 1; k + 1 < seq.size(); ++k) {
      std::uint32_t mid = out.fresh_nonterminal(slp.nt_name(a) + "'");
      out.set_production(mid, {item_nt(acc), item_nt(seq[k])});
      acc = mid;
    }
    out.set_production(own[a], {item_nt(acc), item_nt(seq.back())});
    repr[a] = own[a];
  }

  out.set_start(repr[slp.start()]);
  // Restrict to nonterminals reachable from the start.
  Slp pruned;
  std::vector<std::int64_t> map(out.nt_count(), -1);
  std::vector<std::uint32_t> stack{out.start()};
  map[out.start()] = 0;
  pruned.add_nonterminal(out.nt_name(out.start()));
  while (!stack.empty()) {
    std::uint32_t node = stack.back();
    stack.pop_back();
    for (const auto& item : out.rhs(node)) {
      if (const NtRef* r = std::get_if<NtRef>(&item)) {
        if (map[r->id] < 0) {
          map[r->id] = static_cast<std::int64_t>(pruned.add_nonterminal(out.nt_name(r->id)));
          stack.push_back(r->id);
        }
      }
    }
  }
  for (std::uint32_t id = 0; id < out.nt_count(); ++id) {
    if (map[id] < 0) continue;
    std::vector<RhsItem> items = out.rhs(id);
    for (auto& item : items)
      if (NtRef* r = std::get_if<NtRef>(&item)) r->id = static_cast<std::uint32_t>(map[r->id]);
    pruned.set_production(static_cast<std::uint32_t>(map[id]), std::move(items));
  }
  pruned.set_start(static_cast<std::uint32_t>(map[out.start()]));
  return pruned;
}

Slp eliminate_cuts(const CompositionSystem& cs) {
  ValidationReport rep = require_valid(cs);
  Slp out;
  for (std::uint32_t id = 0; id < cs.nt_count(); ++id) out.add_nonterminal(cs.nt_name(id));
  for (std::uint32_t a : rep.topo_order) {
    std::vector<RhsItem> items;
    for (const auto& item : cs.rhs(a)) {
      if (const Cut* c = std::get_if<Cut>(&item)) {
        // The referenced nonterminal is already cut-free in `out` and has the
        // same value, so splice the derivation-path items directly.
        auto spliced = substring_items(out, rep.lengths, c->id, c->lo, c->hi);
        items.insert(items.end(), spliced.begin(), spliced.end());
      } else {
        items.push_back(item);
      }
    }
    out.set_production(a, std::move(items));
  }
  out.set_start(cs.start());
  return out;
}

Slp power_slp(const TermSymbol& sym, const BigInt& count, const std::string& name_hint) {
  if (count < 1) raise(Errc::OutOfRange, "power count " + count.str());
  Slp out;
  // Binary decomposition: D_k produces sym^(2^k).
  std::vector<std::uint32_t> doubles;
  std::uint32_t d0 = out.add_nonterminal(name_hint + "0");
  out.set_production(d0, {item_term(sym)});
  doubles.push_back(d0);
  BigInt bit = 1;
  while (bit * 2 <= count) {
    std::uint32_t prev = doubles.back();
    std::uint32_t next = out.add_nonterminal(name_hint + std::to_string(doubles.size()));
    out.set_production(next, {item_nt(prev), item_nt(prev)});
    doubles.push_back(next);
    bit *= 2;
  }
  std::vector<RhsItem> items;
  BigInt rem = count;
  for (std::size_t k = doubles.size(); k-- > 0;) {
    BigInt p = BigInt(1) << static_cast<unsigned>(k);
    if (rem >= p) {
      items.push_back(item_nt(doubles[k]));
      rem -= p;
    }
  }
  std::uint32_t s = out.add_nonterminal(name_hint);
  out.set_production(s, std::move(items));
  out.set_start(s);
  return out;
}

}  // namespace slpt
