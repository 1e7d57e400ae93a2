#include "slpt/evaluate.hpp"

#include <algorithm>
#include <map>

#include "slpt/fingerprint.hpp"
#include "slpt/slp_ops.hpp"
#include "slpt/transducer.hpp"
#include "slpt/tree_shape.hpp"

namespace slpt {

namespace {

const TermSymbol& gap_symbol() {
  static const TermSymbol s = TermSymbol::ranked("__gap", 0);
  return s;
}

// Standalone SLP whose start expands to the given item sequence over `g`.
Slp slp_from_items(const GrammarBase& g, const std::vector<RhsItem>& items,
                   const std::string& start_name = "VIEW") {
  Slp out;
  std::map<std::uint32_t, std::uint32_t> remap;
  std::function<std::uint32_t(std::uint32_t)> copy_nt = [&](std::uint32_t id) -> std::uint32_t {
    auto it = remap.find(id);
    if (it != remap.end()) return it->second;
    std::uint32_t nid = out.fresh_nonterminal(g.nt_name(id));
    remap.emplace(id, nid);
    std::vector<RhsItem> body = g.rhs(id);
    for (auto& item : body)
      if (NtRef* r = std::get_if<NtRef>(&item)) r->id = copy_nt(r->id);
    out.set_production(nid, std::move(body));
    return nid;
  };
  std::vector<RhsItem> start = items;
  for (auto& item : start)
    if (NtRef* r = std::get_if<NtRef>(&item)) r->id = copy_nt(r->id);
  std::uint32_t s = out.fresh_nonterminal(start_name);
  out.set_production(s, std::move(start));
  out.set_start(s);
  return out;
}

BigInt leaf_const(const TermSymbol& sym) {
  if (sym.is_int_const()) return sym.value();
  raise(Errc::WrongAlphabet, "expected integer leaf, found " + sym.str());
}

bool is01_symbol(const TermSymbol& s) {
  if (s.rank() != 0) return false;
  if (s.is_int_const()) return s.value() == 0 || s.value() == 1;
  return s.name() == "0" || s.name() == "1";
}

ReduceTrace reduce_impl(const Slp& slp, const Interpretation& interp,
                        const CaterpillarOracle& oracle, bool materialize_pairs) {
  require_tree(slp);
  if (!interp.is_poly_bounded)
    raise(Errc::ValueTooLarge, "interpretation '" + interp.name + "' is not polynomially bounded");
  ReduceTrace trace;
  trace.cnf = normalize_cnf(slp);
  const Slp& cnf = trace.cnf;
  ValidationReport rep = require_valid(cnf);
  std::vector<TreeShape> shapes = compute_shapes(cnf);

  // Cut-free working grammar; cuts are spliced at insertion time.
  Slp cs;
  std::vector<BigInt> cs_lens;
  auto add_nt = [&](const std::string& base, std::vector<RhsItem> items) {
    std::uint32_t id = cs.fresh_nonterminal(base);
    BigInt len = 0;
    for (const auto& item : items) {
      if (std::holds_alternative<TermSymbol>(item))
        len += 1;
      else
        len += cs_lens[std::get<NtRef>(item).id];
    }
    cs.set_production(id, std::move(items));
    cs_lens.push_back(len);
    return id;
  };
  auto cut_items = [&](std::uint32_t nt, const BigInt& lo, const BigInt& hi) {
    return substring_items(cs, cs_lens, nt, lo, hi);
  };
  auto eval_const = [&](const TermSymbol& f) {
    BigInt v = interp.apply(f, {});
    if (!interp.in_domain(v)) raise(Errc::DomainViolation, f.str() + " -> " + v.str());
    return v;
  };
  auto call_oracle = [&](const Slp& cat) {
    ++trace.oracle_calls;
    BigInt v = oracle(cat);
    if (!interp.in_domain(v)) raise(Errc::DomainViolation, "oracle value " + v.str());
    return v;
  };

  std::vector<std::uint32_t> a1(cnf.nt_count()), a2(cnf.nt_count());
  SymbolPred internal = pred_rank_positive();

  for (std::uint32_t a : rep.topo_order) {
    const auto& items = cnf.rhs(a);
    const std::string& nm = cnf.nt_name(a);
    if (items.size() == 1) {
      const TermSymbol& f = std::get<TermSymbol>(items[0]);
      if (f.rank() == 0) {
        a1[a] = add_nt(nm + ".v", {item_term(TermSymbol::int_const(eval_const(f)))});
        a2[a] = add_nt(nm + ".s", {});
      } else {
        a1[a] = add_nt(nm + ".v", {});
        a2[a] = add_nt(nm + ".s", {item_term(f)});
      }
      continue;
    }
    std::uint32_t bid = std::get<NtRef>(items[0]).id;
    std::uint32_t cid = std::get<NtRef>(items[1]).id;
    const BigInt& b2 = shapes[bid].gaps;
    const BigInt& c1 = shapes[cid].full;
    std::uint32_t B1 = a1[bid], B2 = a2[bid], C1 = a1[cid], C2 = a2[cid];
    if (b2 == 0) {
      a1[a] = add_nt(nm + ".v", {item_nt(B1), item_nt(C1)});
      a2[a] = add_nt(nm + ".s", {item_nt(C2)});
    } else if (b2 <= c1) {
      // Closing B's fragment with the first b2 values of C completes a tree.
      std::vector<RhsItem> tnew{item_nt(B2)};
      auto fill = cut_items(C1, 1, b2);
      tnew.insert(tnew.end(), fill.begin(), fill.end());
      BigInt v = call_oracle(slp_from_items(cs, tnew, "TNEW"));
      std::vector<RhsItem> vitems{item_nt(B1), item_term(TermSymbol::int_const(v))};
      auto rest = cut_items(C1, b2 + 1, c1);
      vitems.insert(vitems.end(), rest.begin(), rest.end());
      a1[a] = add_nt(nm + ".v", std::move(vitems));
      a2[a] = add_nt(nm + ".s", {item_nt(C2)});
    } else if (c1 == 0) {
      a1[a] = add_nt(nm + ".v", {item_nt(B1)});
      a2[a] = add_nt(nm + ".s", {item_nt(B2), item_nt(C2)});
    } else {
      // C's trees and fragment sink into B's gaps; if that closes a subtree
      // inside the fragment, evaluate it and splice the value in.
      BigInt d = b2 - c1;
      Slp tprime = concat_slp(
          {slp_from_items(cs, {item_nt(B2), item_nt(C1)}, "TP"), power_slp(gap_symbol(), d, "GP")});
      DfudsIndex idx(std::move(tprime));
      BigInt r = cs_lens[B2] + c1 + 1;
      BigInt q = idx.parent(r);
      GammaCounts ops(idx.tree(), internal);
      BigInt before_q = ops.count_prefix(q);
      if (before_q == ops.total()) {
        // already a caterpillar fragment
        a1[a] = add_nt(nm + ".v", {item_nt(B1)});
        a2[a] = add_nt(nm + ".s", {item_nt(B2), item_nt(C1), item_nt(C2)});
      } else {
        BigInt p = ops.select(before_q + 1);
        BigInt pp = p + idx.subtree_size(p) - 1;
        if (pp > cs_lens[B2] + c1)
          raise(Errc::NotATree, "completed subtree leaks past the inserted values");
        std::uint32_t Ap = add_nt(nm + ".bc", {item_nt(B2), item_nt(C1)});
        BigInt v = call_oracle(slp_from_items(cs, cut_items(Ap, p, pp), "TCAT"));
        std::vector<RhsItem> sitems = cut_items(Ap, 1, p - 1);
        sitems.push_back(item_term(TermSymbol::int_const(v)));
        auto tail = cut_items(Ap, pp + 1, cs_lens[Ap]);
        sitems.insert(sitems.end(), tail.begin(), tail.end());
        sitems.push_back(item_nt(C2));
        a1[a] = add_nt(nm + ".v", {item_nt(B1)});
        a2[a] = add_nt(nm + ".s", std::move(sitems));
      }
    }
  }

  std::uint32_t s1 = a1[cnf.start()];
  if (cs_lens[s1] != 1) raise(Errc::NotATree, "start does not reduce to one value");
  cs.set_start(s1);
  Slp view = slp_from_items(cs, {item_nt(s1)}, "RESULT");
  trace.value = leaf_const(expand(view, 4)[0]);

  if (materialize_pairs) {
    trace.pairs.reserve(cnf.nt_count());
    for (std::uint32_t a = 0; a < cnf.nt_count(); ++a) {
      EvalPair pair{slp_from_items(cs, {item_nt(a1[a])}, "V"),
                    slp_from_items(cs, {item_nt(a2[a])}, "F")};
      trace.pairs.push_back(std::move(pair));
    }
  }
  return trace;
}

}  // namespace

ReduceTrace reduce_to_caterpillar_traced(const Slp& slp, const Interpretation& interp,
                                         const CaterpillarOracle& oracle) {
  return reduce_impl(slp, interp, oracle, true);
}

BigInt reduce_to_caterpillar(const Slp& slp, const Interpretation& interp,
                             const CaterpillarOracle& oracle, std::size_t* oracle_calls) {
  ReduceTrace trace = reduce_impl(slp, interp, oracle, false);
  if (oracle_calls != nullptr) *oracle_calls = trace.oracle_calls;
  return trace.value;
}

CaterpillarOracle brute_oracle(const Interpretation& interp, std::uint64_t limit) {
  return [interp, limit](const Slp& cat) { return eval_brute(expand(cat, limit), interp); };
}

// --- height / strahler caterpillar chains ------------------------------------

BigInt eval_caterpillar_max_chain(const Slp& caterpillar, bool strahler_mode) {
  require_tree(caterpillar);
  SymbolPred internal = pred_rank_positive();
  GammaCounts ops(caterpillar, internal);
  BigInt m = ops.total();
  if (m == 0) return leaf_const(symbol_at(caterpillar, 1));

  BigInt k = ops.select(m);  // deepest internal node
  DfudsIndex idx(caterpillar);

  // Distinct leaf constants; at most |grammar| many.
  std::vector<BigInt> consts;
  for (const auto& sym : occurring_symbols(caterpillar))
    if (sym.rank() == 0) consts.push_back(leaf_const(sym));

  // Deepest parents per constant. Internal nodes of a caterpillar appear in
  // depth order, so deeper means larger position. Occurrences left of k sit
  // in parent-depth order; occurrences right of k in reverse order.
  struct Event {
    BigInt node;
    BigInt value;
  };
  std::vector<Event> events;
  for (const BigInt& d : consts) {
    GammaCounts gd(caterpillar, pred_of({TermSymbol::int_const(d)}));
    BigInt total = gd.total();
    if (total == 0) continue;
    BigInt left = gd.count_prefix(k);
    std::vector<BigInt> cand;  // parent positions, one per tracked occurrence
    int want = strahler_mode ? 2 : 1;
    for (int t = 0; t < want; ++t) {
      if (left - t >= 1) cand.push_back(idx.parent(gd.select(left - t)));
      if (left + 1 + t <= total) cand.push_back(idx.parent(gd.select(left + 1 + t)));
    }
    std::sort(cand.begin(), cand.end(), [](const BigInt& a, const BigInt& b) { return a > b; });
    int keep = std::min<int>(want, static_cast<int>(cand.size()));
    for (int t = 0; t < keep; ++t) events.push_back({cand[t], d});
  }

  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    return a.node > b.node;  // deepest first
  });

  if (strahler_mode) {
    // Group events per node; the running value joins the group max and a
    // repeated maximum bumps by one.
    BigInt value;
    bool have = false;
    std::size_t i = 0;
    while (i < events.size()) {
      std::size_t j = i;
      std::vector<BigInt> vals;
      while (j < events.size() && events[j].node == events[i].node) vals.push_back(events[j++].value);
      if (have) vals.push_back(value);
      BigInt mx = vals[0];
      for (const auto& v : vals)
        if (v > mx) mx = v;
      int hits = 0;
      for (const auto& v : vals)
        if (v == mx) ++hits;
      value = hits >= 2 ? mx + 1 : mx;
      have = true;
      i = j;
    }
    return value;
  }

  // Height: only the deepest event per constant matters; dedupe nodes keeping
  // the largest constant, then climb adding one per internal node.
  std::map<BigInt, BigInt> best;  // node -> max constant
  for (const auto& ev : events) {
    auto it = best.find(ev.node);
    if (it == best.end() || it->second < ev.value) best[ev.node] = ev.value;
  }
  auto it = best.rbegin();
  BigInt value = it->second + 1;
  BigInt prev_node = it->first;
  for (++it; it != best.rend(); ++it) {
    BigInt between = ops.count_prefix(prev_node - 1) - ops.count_prefix(it->first);
    BigInt climbed = value + between + 1;
    BigInt local = it->second + 1;
    value = climbed > local ? climbed : local;
    prev_node = it->first;
  }
  value += ops.count_prefix(prev_node - 1);
  return value;
}

namespace {

// Replace every rank-0 symbol by the integer 0; height and depth are
// structural, so leaf constants must not leak their values in.
Slp zero_leaves(const Slp& slp) {
  FunctionalTransducer hom(1, 0);
  for (const auto& sym : occurring_symbols(slp)) {
    if (sym.rank() == 0)
      hom.add_transition(0, sym, 0, {TermSymbol::int_const(0)});
    else
      hom.add_transition(0, sym, 0, {sym});
  }
  return apply_transducer(slp, hom);
}

}  // namespace

BigInt height(const Slp& slp) {
  require_tree(slp);
  return reduce_to_caterpillar(zero_leaves(slp), height_interp(),
                               [](const Slp& cat) { return eval_caterpillar_max_chain(cat, false); });
}

BigInt strahler(const Slp& slp) {
  require_tree(slp);
  return reduce_to_caterpillar(zero_leaves(slp), strahler_interp(),
                               [](const Slp& cat) { return eval_caterpillar_max_chain(cat, true); });
}

BigInt node_depth(const Slp& slp, const BigInt& i) {
  require_tree(slp);
  ValidationReport rep = require_valid(slp);
  const BigInt& n = rep.lengths[slp.start()];
  if (i < 1 || i > n) raise(Errc::OutOfRange, "node " + i.str());
  if (i == 1) return 0;
  DfudsIndex idx(slp);
  BigInt sz = idx.subtree_size(i);
  // Replace the subtree at i by a unary chain of length |t| and read the
  // depth off the height.
  std::vector<SlpOrWord> parts;
  parts.push_back(substring_slp(slp, 1, i - 1));
  parts.push_back(power_slp(TermSymbol::ranked("__h", 1), n, "HP"));
  parts.push_back(std::vector<TermSymbol>{TermSymbol::ranked("__a", 0)});
  if (i + sz <= n) parts.push_back(substring_slp(slp, i + sz, n));
  return height(concat_slp(parts)) - n;
}

// --- boolean evaluation -------------------------------------------------------

namespace {

TermSymbol and_sym() { return TermSymbol::ranked("and", 2); }
TermSymbol or_sym() { return TermSymbol::ranked("or", 2); }
TermSymbol paired_sym(bool is_and, int bit) {
  return TermSymbol::ranked(std::string(is_and ? "and" : "or") + (bit ? "1" : "0"), 0);
}
TermSymbol bitsym(int b) { return TermSymbol::ranked(b ? "1" : "0", 0); }

// possibly-empty slice as a standalone grammar
Slp slice_slp(const Slp& slp, const std::vector<BigInt>& lens, const BigInt& lo,
              const BigInt& hi) {
  return slp_from_items(slp, substring_items(slp, lens, slp.start(), lo, hi), "SL");
}

int bool_leaf(const TermSymbol& sym) {
  BigInt v = sym.is_int_const() ? sym.value() : (sym.name() == "1" ? 1 : (sym.name() == "0" ? 0 : -1));
  if (v != 0 && v != 1) raise(Errc::WrongAlphabet, sym.str());
  return static_cast<int>(v);
}

}  // namespace

BigInt eval_caterpillar_bool(const Slp& caterpillar) {
  require_tree(caterpillar);
  ValidationReport rep = require_valid(caterpillar);
  const BigInt L = rep.lengths[caterpillar.start()];
  if (L == 1) return bool_leaf(symbol_at(caterpillar, 1));

  // u = spine prefix through the last operator, v = trailing constants.
  std::vector<BigInt> suff01(caterpillar.nt_count(), 0);
  auto is01 = [](const TermSymbol& s) {
    return s.rank() == 0 && (s.is_int_const() ? (s.value() == 0 || s.value() == 1)
                                              : (s.name() == "0" || s.name() == "1"));
  };
  for (std::uint32_t a : rep.topo_order) {
    BigInt acc = 0;
    const auto& items = caterpillar.rhs(a);
    for (std::size_t ix = items.size(); ix-- > 0;) {
      const RhsItem& item = items[ix];
      if (const TermSymbol* t = std::get_if<TermSymbol>(&item)) {
        if (is01(*t)) {
          acc += 1;
          continue;
        }
        break;
      }
      std::uint32_t id = std::get<NtRef>(item).id;
      acc += suff01[id];
      if (suff01[id] != rep.lengths[id]) break;
    }
    suff01[a] = acc;
  }
  BigInt s = suff01[caterpillar.start()];
  if (s >= L) return bool_leaf(symbol_at(caterpillar, 1));  // all constants: single node
  Slp u = slice_slp(caterpillar, rep.lengths, 1, L - s);
  Slp v = slice_slp(caterpillar, rep.lengths, L - s + 1, L);

  // Pair every operator with its immediate constant argument.
  FunctionalTransducer pairing(3, 0);
  std::vector<std::pair<int, bool>> states{{1, true}, {2, false}};  // state -> pending op
  for (const auto& opsym : {and_sym(), or_sym()}) {
    bool is_and = opsym == and_sym();
    int target = is_and ? 1 : 2;
    pairing.add_transition(0, opsym, target, {});
    pairing.add_transition(1, opsym, target, {and_sym()});
    pairing.add_transition(2, opsym, target, {or_sym()});
  }
  for (int bit = 0; bit <= 1; ++bit) {
    for (const TermSymbol& c : {bitsym(bit), TermSymbol::int_const(bit)}) {
      pairing.add_transition(0, c, 0, {c});  // cannot occur inside u
      pairing.add_transition(1, c, 0, {paired_sym(true, bit)});
      pairing.add_transition(2, c, 0, {paired_sym(false, bit)});
    }
  }
  pairing.set_final_output(1, {and_sym()});
  pairing.set_final_output(2, {or_sym()});
  Slp b1 = apply_transducer(u, pairing);

  // Cut at the first absorbing pair (and0 / or1).
  GammaCounts absorbing(b1, pred_of({paired_sym(true, 0), paired_sym(false, 1)}));
  GammaCounts bare(b1, pred_of({and_sym(), or_sym()}));
  ValidationReport rb1 = require_valid(b1);
  ValidationReport rv = require_valid(v);
  Slp c1part;
  Slp b2part;
  if (absorbing.total() > 0) {
    BigInt i = absorbing.select(1);
    c1part = slice_slp(b1, rb1.lengths, 1, i - 1);
    BigInt j = bare.total() - bare.count_prefix(i - 1);
    Slp tailv = slice_slp(v, rv.lengths, j + 2, rv.lengths[v.start()]);
    int bit = symbol_at(b1, i) == paired_sym(true, 0) ? 0 : 1;
    b2part = concat_slp({std::vector<TermSymbol>{bitsym(bit)}, tailv});
  } else {
    c1part = b1;
    b2part = v;
  }

  // Delete the identity pairs and1 / or0.
  FunctionalTransducer erase(1, 0);
  erase.add_transition(0, and_sym(), 0, {and_sym()});
  erase.add_transition(0, or_sym(), 0, {or_sym()});
  erase.add_transition(0, paired_sym(true, 1), 0, {});
  erase.add_transition(0, paired_sym(false, 0), 0, {});
  erase.add_transition(0, paired_sym(true, 0), 0, {paired_sym(true, 0)});
  erase.add_transition(0, paired_sym(false, 1), 0, {paired_sym(false, 1)});
  Slp d1 = apply_transducer(c1part, erase);

  ValidationReport rd = require_valid(d1);
  BigInt md = rd.lengths[d1.start()];
  ValidationReport rb2 = require_valid(b2part);
  if (rb2.lengths[b2part.start()] != md + 1)
    raise(Errc::NotCaterpillar, "left caterpillar arity mismatch");
  if (md == 0) return bool_leaf(symbol_at(b2part, 1));

  // Left caterpillar d1 b2: compare psi(d1) against rev(b2) and read the
  // value at the first disagreement.
  FunctionalTransducer psi(1, 0);
  psi.add_transition(0, and_sym(), 0, {bitsym(1)});
  psi.add_transition(0, or_sym(), 0, {bitsym(0)});
  Slp s1 = apply_transducer(d1, psi);
  FunctionalTransducer canon(1, 0);
  for (int bit = 0; bit <= 1; ++bit) {
    canon.add_transition(0, bitsym(bit), 0, {bitsym(bit)});
    canon.add_transition(0, TermSymbol::int_const(bit), 0, {bitsym(bit)});
  }
  Slp s2 = apply_transducer(reverse_slp(b2part), canon);

  auto code = [](const TermSymbol& sym) -> std::uint64_t { return sym.name() == "1" ? 1 : 2; };
  PrefixHasher h1(s1, code), h2(s2, code);
  BigInt agree = common_prefix_length(h1, h2, md);
  if (agree == md) return bool_leaf(symbol_at(b2part, 1));
  TermSymbol op = symbol_at(d1, agree + 1);
  return op == and_sym() ? 0 : 1;
}

int eval_bool(const Slp& slp) {
  for (const auto& sym : occurring_symbols(slp)) {
    bool ok = sym == and_sym() || sym == or_sym() || is01_symbol(sym);
    if (!ok) raise(Errc::WrongAlphabet, sym.str());
  }
  BigInt v = reduce_to_caterpillar(slp, bool_interp(), eval_caterpillar_bool);
  return static_cast<int>(v);
}

std::string eval_lattice(const Slp& slp, const LatticeSpec& lattice) {
  if (lattice.elements.empty()) raise(Errc::InvalidEmbedding, "empty lattice");
  std::size_t width = lattice.elements[0].second.size();
  for (const auto& [name, vec] : lattice.elements) {
    if (vec.size() != width) raise(Errc::InvalidEmbedding, "ragged vectors");
    for (int b : vec)
      if (b != 0 && b != 1) raise(Errc::InvalidEmbedding, "non-binary component for " + name);
  }
  for (std::size_t x = 0; x < lattice.elements.size(); ++x)
    for (std::size_t y = x + 1; y < lattice.elements.size(); ++y)
      if (lattice.elements[x].second == lattice.elements[y].second)
        raise(Errc::InvalidEmbedding,
              lattice.elements[x].first + " and " + lattice.elements[y].first + " share a vector");

  TermSymbol meet = TermSymbol::ranked("meet", 2);
  TermSymbol join = TermSymbol::ranked("join", 2);
  for (const auto& sym : occurring_symbols(slp)) {
    if (sym == meet || sym == join) continue;
    bool known = false;
    if (sym.rank() == 0 && !sym.is_int_const())
      for (const auto& [name, vec] : lattice.elements)
        if (name == sym.name()) known = true;
    if (!known) raise(Errc::WrongAlphabet, sym.str());
  }

  std::vector<int> result_bits(width, 0);
  for (std::size_t b = 0; b < width; ++b) {
    FunctionalTransducer hom(1, 0);
    hom.add_transition(0, meet, 0, {and_sym()});
    hom.add_transition(0, join, 0, {or_sym()});
    for (const auto& [name, vec] : lattice.elements)
      hom.add_transition(0, TermSymbol::ranked(name, 0), 0, {bitsym(vec[b])});
    result_bits[b] = eval_bool(apply_transducer(slp, hom));
  }
  for (const auto& [name, vec] : lattice.elements)
    if (vec == result_bits) return name;
  raise(Errc::InvalidEmbedding, "result vector is not a lattice element (meet/join not closed)");
}

// --- arithmetic ----------------------------------------------------------------

BigInt eval_plus_times_exact(const Slp& slp, std::uint64_t node_limit) {
  require_tree(slp);
  ValidationReport rep = require_valid(slp);
  if (rep.lengths[slp.start()] > BigInt(node_limit))
    raise(Errc::ValueTooLarge,
          "exact {+,*} values can need 2^|A| bits; tree too large to expand");
  return eval_brute(expand(slp, node_limit), plus_times_interp());
}

BigInt eval_plus_times_mod(const Slp& slp, const BigInt& p, std::uint64_t desk_limit) {
  Interpretation interp = plus_times_mod_interp(p);
  return reduce_to_caterpillar(slp, interp, [&p, desk_limit](const Slp& cat) {
    return PlusTimesMatrix(cat, p).row_product_sum(desk_limit);
  });
}

BigInt eval_max_plus(const Slp& slp, std::uint64_t desk_limit) {
  return reduce_to_caterpillar(slp, max_plus_interp(), [desk_limit](const Slp& cat) {
    return MaxPlusMatrix(cat).max_row_sum(desk_limit);
  });
}

// --- caterpillar accessors -----------------------------------------------------

CaterpillarView::CaterpillarView(const Slp& slp)
    : slp_(slp), idx_(slp_), ops_(slp_, pred_rank_positive()), m_(ops_.total()) {
  if (m_ > 0) {
    // Internal nodes form a chain iff the last operator sits at depth m-1.
    BigInt deepest = ops_.select(m_);
    if (node_depth(slp_, deepest) != m_ - 1)
      raise(Errc::NotCaterpillar, "internal nodes do not form a chain");
  }
  for (const auto& sym : occurring_symbols(slp_))
    if (sym.rank() != 0 && sym.rank() != 2)
      raise(Errc::NotCaterpillar, "operator arity " + std::to_string(sym.rank()));
}

TermSymbol CaterpillarView::op(const BigInt& i) const {
  if (i < 1 || i > m_) raise(Errc::OutOfRange, "operator " + i.str());
  return idx_.label_at(ops_.select(i));
}

BigInt CaterpillarView::operand(const BigInt& j) const {
  if (j < 1 || j > m_ + 1) raise(Errc::OutOfRange, "operand " + j.str());
  if (m_ == 0) return leaf_const(idx_.label_at(1));
  if (j == m_ + 1) {
    BigInt node = ops_.select(m_);
    return leaf_const(idx_.label_at(idx_.kth_child(node, 2)));
  }
  BigInt node = ops_.select(j);
  TermSymbol left = idx_.label_at(idx_.kth_child(node, 1));
  if (j == m_) return leaf_const(left);
  if (left.rank() == 0) return leaf_const(left);
  return leaf_const(idx_.label_at(idx_.kth_child(node, 2)));
}

TermSymbol caterpillar_op(const Slp& slp, const BigInt& i) {
  require_tree(slp);
  return CaterpillarView(slp).op(i);
}

BigInt caterpillar_operand(const Slp& slp, const BigInt& j) {
  require_tree(slp);
  return CaterpillarView(slp).operand(j);
}

// --- matrices -------------------------------------------------------------------

PlusTimesMatrix::PlusTimesMatrix(const Slp& caterpillar, const BigInt& p)
    : view_(caterpillar), p_(p) {
  if (!is_probable_prime(p)) raise(Errc::NotPrime, p.str());
}

BigInt PlusTimesMatrix::entry(const BigInt& i, const BigInt& j) const {
  const BigInt& m = view_.operator_count();
  if (i < 1 || j < 1 || i > m + 1 || j > m + 1)
    raise(Errc::OutOfRange, "(" + i.str() + "," + j.str() + ")");
  auto modp = [&](BigInt v) {
    v %= p_;
    if (v < 0) v += p_;
    return v;
  };
  auto is_plus = [&](const BigInt& idx) { return view_.op(idx).name() == "+"; };
  if (i < j) return is_plus(i) ? 1 : 0;
  if (i == j) {
    if (i == m + 1) return modp(view_.operand(i));
    return is_plus(i) ? modp(view_.operand(i)) : 0;
  }
  return is_plus(j) ? 1 : modp(view_.operand(j));
}

BigInt PlusTimesMatrix::row_product_sum(std::uint64_t desk_limit) const {
  const BigInt& m = view_.operator_count();
  if (m + 1 > BigInt(desk_limit))
    raise(Errc::ValueTooLarge, "caterpillar has " + m.str() + " operators");
  std::uint64_t n = static_cast<std::uint64_t>(m) + 1;
  // Precompute ops/operands once; entries then come from the closed form.
  std::vector<bool> plus(n);
  std::vector<BigInt> operand(n + 1);
  for (std::uint64_t i = 1; i <= n - 1; ++i) plus[i - 1] = view_.op(i).name() == "+";
  for (std::uint64_t j = 1; j <= n; ++j) {
    operand[j] = view_.operand(j) % p_;
    if (operand[j] < 0) operand[j] += p_;
  }
  BigInt sum = 0;
  for (std::uint64_t i = 1; i <= n; ++i) {
    BigInt prod = 1;
    for (std::uint64_t j = 1; j <= n && prod != 0; ++j) {
      BigInt x;
      if (i < j)
        x = (i <= n - 1 && plus[i - 1]) ? 1 : 0;
      else if (i == j)
        x = (i == n) ? operand[i] : (plus[i - 1] ? operand[i] : 0);
      else
        x = plus[j - 1] ? 1 : operand[j];
      prod = (prod * x) % p_;
    }
    sum = (sum + prod) % p_;
  }
  return sum;
}

MaxPlusMatrix::MaxPlusMatrix(const Slp& caterpillar) : view_(caterpillar) {}

std::optional<BigInt> MaxPlusMatrix::entry(const BigInt& i, const BigInt& j) const {
  const BigInt& m = view_.operator_count();
  if (i < 1 || j < 1 || i > m + 1 || j > m + 1)
    raise(Errc::OutOfRange, "(" + i.str() + "," + j.str() + ")");
  auto is_max = [&](const BigInt& idx) { return view_.op(idx).name() == "max"; };
  if (i < j) return is_max(i) ? std::optional<BigInt>(0) : std::nullopt;
  if (i == j) {
    if (i == m + 1) return view_.operand(i);
    return is_max(i) ? std::optional<BigInt>(view_.operand(i)) : std::nullopt;
  }
  return is_max(j) ? BigInt(0) : view_.operand(j);
}

BigInt MaxPlusMatrix::max_row_sum(std::uint64_t desk_limit) const {
  const BigInt& m = view_.operator_count();
  if (m + 1 > BigInt(desk_limit))
    raise(Errc::ValueTooLarge, "caterpillar has " + m.str() + " operators");
  std::uint64_t n = static_cast<std::uint64_t>(m) + 1;
  std::vector<bool> mx(n);
  std::vector<BigInt> operand(n + 1);
  for (std::uint64_t i = 1; i <= n - 1; ++i) mx[i - 1] = view_.op(i).name() == "max";
  for (std::uint64_t j = 1; j <= n; ++j) operand[j] = view_.operand(j);
  std::optional<BigInt> best;
  for (std::uint64_t i = 1; i <= n; ++i) {
    if (i <= n - 1 && !mx[i - 1]) continue;  // excluded (sentinel) row
    BigInt sum = 0;
    for (std::uint64_t j = 1; j <= n; ++j) {
      if (i < j)
        ;  // 0
      else if (i == j)
        sum += operand[i];
      else if (!mx[j - 1])
        sum += operand[j];
    }
    if (!best || sum > *best) best = sum;
  }
  return *best;
}

}  // namespace slpt
