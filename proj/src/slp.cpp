#include "slpt/slp.hpp"

#include <algorithm>

namespace slpt {

std::string ValidationReport::describe() const {
  if (ok) return "valid";
  std::string out;
  for (const auto& i : issues) {
    if (!out.empty()) out += "; ";
    out += std::string(errc_name(i.kind)) + "(" + i.nonterminal + ")";
  }
  return out;
}

ValidationReport validate(const GrammarBase& g) {
  ValidationReport rep;
  const std::size_t n = g.nt_count();
  if (n == 0) {
    rep.issues.push_back({Errc::MissingProduction, "<no nonterminals>"});
    return rep;
  }

  for (std::uint32_t i = 0; i < n; ++i) {
    if (!g.defined(i)) rep.issues.push_back({Errc::UnknownNonterminal, g.nt_name(i)});
  }
  if (g.start() >= n) {
    rep.issues.push_back({Errc::UnknownNonterminal, "<start>"});
    return rep;
  }
  if (!rep.issues.empty()) return rep;

  // Iterative DFS over the reference relation; a gray-gray edge is a cycle.
  enum : unsigned char { White, Gray, Black };
  std::vector<unsigned char> color(n, White);
  std::vector<std::uint32_t> order;
  order.reserve(n);
  for (std::uint32_t root = 0; root < n; ++root) {
    if (color[root] != White) continue;
    // stack holds (node, next child index into rhs)
    std::vector<std::pair<std::uint32_t, std::size_t>> stack;
    stack.push_back({root, 0});
    color[root] = Gray;
    while (!stack.empty()) {
      auto& [node, idx] = stack.back();
      const auto& items = g.rhs(node);
      bool descended = false;
      while (idx < items.size()) {
        std::size_t cur = idx++;
        std::uint32_t child;
        if (const NtRef* r = std::get_if<NtRef>(&items[cur]))
          child = r->id;
        else if (const Cut* c = std::get_if<Cut>(&items[cur]))
          child = c->id;
        else
          continue;
        if (color[child] == Gray) {
          rep.issues.push_back({Errc::CyclicGrammar, g.nt_name(child)});
          return rep;
        }
        if (color[child] == White) {
          color[child] = Gray;
          stack.push_back({child, 0});
          descended = true;
          break;
        }
      }
      if (!descended && idx >= items.size()) {
        color[node] = Black;
        order.push_back(node);
        stack.pop_back();
      }
    }
  }

  rep.topo_order = std::move(order);
  rep.lengths.assign(n, BigInt(0));
  for (std::uint32_t a : rep.topo_order) {
    BigInt len = 0;
    for (const auto& item : g.rhs(a)) {
      if (std::holds_alternative<TermSymbol>(item)) {
        len += 1;
      } else if (const NtRef* r = std::get_if<NtRef>(&item)) {
        len += rep.lengths[r->id];
      } else {
        const Cut& c = std::get<Cut>(item);
        if (c.lo < 1 || c.hi > rep.lengths[c.id] || c.lo > c.hi + 1) {
          rep.issues.push_back({Errc::OutOfRange, g.nt_name(a)});
          rep.ok = false;
          return rep;
        }
        len += c.hi - c.lo + 1;
      }
    }
    rep.lengths[a] = len;
  }
  rep.ok = true;
  return rep;
}

ValidationReport require_valid(const GrammarBase& g) {
  ValidationReport rep = validate(g);
  if (!rep.ok) {
    const auto& first = rep.issues.at(0);
    raise(first.kind, first.nonterminal);
  }
  return rep;
}

Slp literal_slp(const std::vector<TermSymbol>& w, const std::string& start_name) {
  Slp slp;
  std::uint32_t s = slp.add_nonterminal(start_name);
  std::vector<RhsItem> items;
  items.reserve(w.size());
  for (const auto& sym : w) items.push_back(item_term(sym));
  slp.set_production(s, std::move(items));
  slp.set_start(s);
  return slp;
}

std::size_t grammar_depth(const GrammarBase& g) {
  ValidationReport rep = require_valid(g);
  std::vector<std::size_t> depth(g.nt_count(), 0);
  for (std::uint32_t a : rep.topo_order) {
    std::size_t d = 0;
    for (const auto& item : g.rhs(a)) {
      if (const NtRef* r = std::get_if<NtRef>(&item))
        d = std::max(d, depth[r->id]);
      else if (const Cut* c = std::get_if<Cut>(&item))
        d = std::max(d, depth[c->id]);
    }
    depth[a] = d + 1;
  }
  return depth[g.start()];
}

}  // namespace slpt
