#include "slpt/bp.hpp"

#include <algorithm>
#include <functional>

namespace slpt {

const TermSymbol& BpSlp::open_sym() {
  static const TermSymbol s = TermSymbol::ranked("(", 0);
  return s;
}
const TermSymbol& BpSlp::close_sym() {
  static const TermSymbol s = TermSymbol::ranked(")", 0);
  return s;
}

namespace {
bool term_is_open(const TermSymbol& s) { return s == BpSlp::open_sym(); }
}  // namespace

BpSlp::BpSlp(Slp grammar) : g_(std::move(grammar)) {
  ValidationReport rep = require_valid(g_);
  len_ = rep.lengths;
  close_.assign(g_.nt_count(), BigInt(0));
  total_.assign(g_.nt_count(), BigInt(0));
  minp_.assign(g_.nt_count(), std::nullopt);
  // Excess summaries compose by the standard left fold:
  // min(AB) = min(min(A), total(A) + min(B)).
  for (std::uint32_t a : rep.topo_order) {
    BigInt close = 0, total = 0;
    std::optional<BigInt> minp;
    for (const auto& item : g_.rhs(a)) {
      Stats st = stats_of(item);
      if (st.len == 0) continue;
      if (st.minp) {
        BigInt cand = total + *st.minp;
        if (!minp || cand < *minp) minp = std::move(cand);
      }
      close += st.close;
      total += st.total;
    }
    close_[a] = std::move(close);
    total_[a] = std::move(total);
    minp_[a] = std::move(minp);
  }
}

BpSlp::Stats BpSlp::stats_of(const RhsItem& item) const {
  if (const TermSymbol* t = std::get_if<TermSymbol>(&item)) {
    if (term_is_open(*t)) return {1, 0, 1, BigInt(1)};
    if (*t == close_sym()) return {1, 1, -1, BigInt(-1)};
    raise(Errc::WrongAlphabet, "parenthesis grammar contains " + t->str());
  }
  std::uint32_t id = std::get<NtRef>(item).id;
  return {len_[id], close_[id], total_[id], minp_[id]};
}

bool BpSlp::balanced() const {
  std::uint32_t s = g_.start();
  if (total_[s] != 0) return false;
  return !minp_[s] || *minp_[s] >= 0;
}

bool BpSlp::is_open_at(const BigInt& k) const {
  if (k < 1 || k > length()) raise(Errc::OutOfRange, k.str());
  BigInt rem = k;
  std::uint32_t node = g_.start();
  for (;;) {
    for (const auto& item : g_.rhs(node)) {
      if (const TermSymbol* t = std::get_if<TermSymbol>(&item)) {
        if (rem == 1) return term_is_open(*t);
        rem -= 1;
      } else {
        std::uint32_t id = std::get<NtRef>(item).id;
        if (rem <= len_[id]) {
          node = id;
          break;
        }
        rem -= len_[id];
      }
    }
  }
}

BigInt BpSlp::rank_close(const BigInt& k) const {
  if (k <= 0) return 0;
  if (k >= length()) return close_[g_.start()];
  BigInt rem = k, acc = 0;
  std::uint32_t node = g_.start();
  for (;;) {
    bool descended = false;
    for (const auto& item : g_.rhs(node)) {
      if (const TermSymbol* t = std::get_if<TermSymbol>(&item)) {
        if (!term_is_open(*t)) acc += 1;
        rem -= 1;
        if (rem == 0) return acc;
      } else {
        std::uint32_t id = std::get<NtRef>(item).id;
        if (rem >= len_[id]) {
          acc += close_[id];
          rem -= len_[id];
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

BigInt BpSlp::select_close(const BigInt& i) const {
  if (i < 1 || i > close_[g_.start()]) raise(Errc::NotEnoughOccurrences, i.str());
  BigInt rem = i, pos = 0;
  std::uint32_t node = g_.start();
  for (;;) {
    for (const auto& item : g_.rhs(node)) {
      if (const TermSymbol* t = std::get_if<TermSymbol>(&item)) {
        if (!term_is_open(*t)) {
          if (rem == 1) return pos + 1;
          rem -= 1;
        }
        pos += 1;
      } else {
        std::uint32_t id = std::get<NtRef>(item).id;
        if (rem <= close_[id]) {
          node = id;
          break;
        }
        rem -= close_[id];
        pos += len_[id];
      }
    }
  }
}

BigInt BpSlp::select_open(const BigInt& i) const {
  BigInt opens_total = len_[g_.start()] - close_[g_.start()];
  if (i < 1 || i > opens_total) raise(Errc::NotEnoughOccurrences, i.str());
  BigInt rem = i, pos = 0;
  std::uint32_t node = g_.start();
  for (;;) {
    for (const auto& item : g_.rhs(node)) {
      if (const TermSymbol* t = std::get_if<TermSymbol>(&item)) {
        if (term_is_open(*t)) {
          if (rem == 1) return pos + 1;
          rem -= 1;
        }
        pos += 1;
      } else {
        std::uint32_t id = std::get<NtRef>(item).id;
        BigInt opens = len_[id] - close_[id];
        if (rem <= opens) {
          node = id;
          break;
        }
        rem -= opens;
        pos += len_[id];
      }
    }
  }
}

// --- crossing searches -------------------------------------------------------
//
// Prefix excess steps by +-1, so a region whose min reaches the target and
// which is entered from above the target must cross it (intermediate value
// property); the same argument mirrored drives the backward search.

namespace {
struct ScanRes {
  std::optional<BigInt> hit;
  BigInt e_boundary;  // excess at node end (fwd) / node start (bwd); valid iff !hit
};
}  // namespace

BigInt BpSlp::fwd_full(std::uint32_t node, const BigInt& e_before, const BigInt& target) const {
  // Guaranteed hit: e_before + min(node) <= target < e_before, and excess
  // steps by one, so some item crosses the target.
  BigInt e = e_before, off = 0;
  std::uint32_t cur = node;
  for (;;) {
    bool descended = false;
    for (const auto& item : g_.rhs(cur)) {
      Stats st = stats_of(item);
      if (st.len == 0) continue;
      if (st.minp && e + *st.minp <= target) {
        if (std::holds_alternative<TermSymbol>(item)) return off + 1;
        cur = std::get<NtRef>(item).id;
        descended = true;
        break;
      }
      e += st.total;
      off += st.len;
    }
    if (!descended) raise(Errc::OutOfRange, "forward crossing lost");
  }
}

std::optional<BigInt> BpSlp::fwd_in(std::uint32_t node, const BigInt& from_local,
                                    const BigInt& e_at_from, const BigInt& target) const {
  // Implemented via a local recursion returning the end-of-node excess so the
  // scan can continue past a partially covered first item.
  struct Impl {
    const BpSlp* self;
    BigInt target;
    ScanRes run(std::uint32_t n, const BigInt& from, const BigInt& e_from) {
      BigInt off = 0;
      BigInt e = e_from;
      bool past = from == 0;
      for (const auto& item : self->g_.rhs(n)) {
        Stats st = self->stats_of(item);
        if (st.len == 0) continue;
        if (!past) {
          if (off + st.len <= from) {
            off += st.len;
            if (off == from) past = true;
            continue;
          }
          // off < from < off + len: partially covered, cannot be a terminal
          ScanRes sub = run(std::get<NtRef>(item).id, from - off, e_from);
          if (sub.hit) return {off + *sub.hit, 0};
          e = sub.e_boundary;
          off += st.len;
          past = true;
          continue;
        }
        if (st.minp && e + *st.minp <= target) {
          if (std::holds_alternative<TermSymbol>(item)) return {off + 1, 0};
          return {off + self->fwd_full(std::get<NtRef>(item).id, e, target), 0};
        }
        e += st.total;
        off += st.len;
      }
      return {std::nullopt, e};
    }
  };
  Impl impl{this, target};
  ScanRes res = impl.run(node, from_local, e_at_from);
  return res.hit;
}

BigInt BpSlp::fwd_search(const BigInt& k, const BigInt& target) const {
  if (k < 0 || k > length()) raise(Errc::OutOfRange, k.str());
  BigInt e_k = excess(k);
  if (target >= e_k) raise(Errc::OutOfRange, "fwd_search target not below current excess");
  auto hit = fwd_in(g_.start(), k, e_k, target);
  if (!hit) raise(Errc::OutOfRange, "no forward crossing to excess " + target.str());
  return *hit;
}

std::optional<BigInt> BpSlp::bwd_full(std::uint32_t node, const BigInt& e_after,
                                      const BigInt& target) const {
  // Rightmost position with excess == target; requires min-value <= target
  // <= e_after. Scans right to left.
  const auto& items = g_.rhs(node);
  std::vector<BigInt> offs(items.size() + 1, BigInt(0));
  std::vector<Stats> st(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    st[i] = stats_of(items[i]);
    offs[i + 1] = offs[i] + st[i].len;
  }
  BigInt e = e_after;
  for (std::size_t i = items.size(); i-- > 0;) {
    if (st[i].len == 0) continue;
    BigInt e_begin = e - st[i].total;
    if (std::holds_alternative<TermSymbol>(items[i])) {
      if (e == target) return offs[i] + 1;
    } else if (st[i].minp && e_begin + *st[i].minp <= target && target <= e) {
      auto hit = bwd_full(std::get<NtRef>(items[i]).id, e, target);
      if (hit) return offs[i] + *hit;
    }
    e = std::move(e_begin);
  }
  return std::nullopt;
}

std::optional<BigInt> BpSlp::bwd_in(std::uint32_t node, const BigInt& upto_local,
                                    const BigInt& e_at_upto, const BigInt& target) const {
  // Positions [1, upto-1], right to left; e_at_upto = excess at upto-1 here
  // (the caller passes the excess just before the search origin).
  struct Impl {
    const BpSlp* self;
    BigInt target;
    ScanRes run(std::uint32_t n, const BigInt& upto, const BigInt& e_before) {
      const auto& items = self->g_.rhs(n);
      std::vector<BigInt> offs(items.size() + 1, BigInt(0));
      std::vector<Stats> st(items.size());
      for (std::size_t i = 0; i < items.size(); ++i) {
        st[i] = self->stats_of(items[i]);
        offs[i + 1] = offs[i] + st[i].len;
      }
      BigInt e = e_before;  // valid once we are at/left of upto-1
      bool have_e = false;
      for (std::size_t i = items.size(); i-- > 0;) {
        if (st[i].len == 0) continue;
        if (!have_e) {
          if (offs[i] >= upto - 1) continue;  // fully outside [1, upto-1]
          if (offs[i + 1] > upto - 1) {
            // straddles: positions [offs[i]+1, upto-1] inside this item
            ScanRes sub = run(std::get<NtRef>(items[i]).id, upto - offs[i], e_before);
            if (sub.hit) return {offs[i] + *sub.hit, 0};
            e = sub.e_boundary;
            have_e = true;
            continue;
          }
          // right edge is exactly upto-1
          e = e_before;
          have_e = true;
        }
        BigInt e_begin = e - st[i].total;
        if (std::holds_alternative<TermSymbol>(items[i])) {
          if (e == target) return {offs[i] + 1, 0};
        } else if (st[i].minp && e_begin + *st[i].minp <= target && target <= e) {
          auto hit = self->bwd_full(std::get<NtRef>(items[i]).id, e, target);
          if (hit) return {offs[i] + *hit, 0};
        }
        e = std::move(e_begin);
      }
      return {std::nullopt, have_e ? e : e_before};
    }
  };
  Impl impl{this, target};
  ScanRes res = impl.run(node, upto_local, e_at_upto);
  return res.hit;
}

BigInt BpSlp::bwd_search(const BigInt& k, const BigInt& target) const {
  if (k < 1 || k > length()) raise(Errc::OutOfRange, k.str());
  BigInt e_prev = excess(k - 1);
  if (target > e_prev) raise(Errc::OutOfRange, "bwd_search target above current excess");
  auto hit = bwd_in(g_.start(), k, e_prev, target);
  if (hit) return *hit;
  if (target == 0) return 0;  // the empty prefix
  return -1;
}

BigInt BpSlp::findclose(const BigInt& k) const {
  if (!is_open_at(k)) raise(Errc::NotAParenthesisOfThatKind, k.str());
  return fwd_search(k, excess(k) - 1);
}

BigInt BpSlp::findopen(const BigInt& k) const {
  if (is_open_at(k)) raise(Errc::NotAParenthesisOfThatKind, k.str());
  BigInt j = bwd_search(k, excess(k));
  if (j < 0) raise(Errc::OutOfRange, "no matching open for " + k.str());
  return j + 1;
}

// --- range minimum -----------------------------------------------------------

BigInt BpSlp::range_min(std::uint32_t node, const BigInt& lo, const BigInt& hi,
                        const BigInt& e) const {
  // Min prefix excess over local positions [lo, hi]; e = excess at lo-1.
  // Returns the min; the caller tracks positions separately.
  struct Impl {
    const BpSlp* self;
    // returns (min over [lo..hi], excess at hi)
    std::pair<BigInt, BigInt> run(std::uint32_t n, const BigInt& lo, const BigInt& hi,
                                  const BigInt& e_before) {
      BigInt off = 0;
      BigInt e = e_before;
      std::optional<BigInt> best;
      for (const auto& item : self->g_.rhs(n)) {
        Stats st = self->stats_of(item);
        if (st.len == 0) continue;
        if (off + st.len < lo) {
          off += st.len;
          continue;
        }
        if (off >= hi) break;
        BigInt a = lo - off;
        if (a < 1) a = 1;
        BigInt b = hi - off;
        if (b > st.len) b = st.len;
        if (a == 1 && b == st.len) {
          BigInt cand = e + *st.minp;
          if (!best || cand < *best) best = std::move(cand);
          e += st.total;
        } else if (std::holds_alternative<TermSymbol>(item)) {
          e += st.total;
          if (!best || e < *best) best = e;
        } else {
          auto [m2, e2] = run(std::get<NtRef>(item).id, a, b, e);
          if (!best || m2 < *best) best = m2;
          e = std::move(e2);
        }
        off += st.len;
      }
      return {*best, e};
    }
  };
  Impl impl{this};
  return impl.run(node, lo, hi, e).first;
}

BigInt BpSlp::leftmost_at_min(std::uint32_t node, const BigInt& lo, const BigInt& hi,
                              const BigInt& e, const BigInt& m) const {
  // Leftmost local position in [lo, hi] with prefix excess == m; m is known
  // to be attained. Prefer-left bias: descend into the first item reaching m.
  struct Impl {
    const BpSlp* self;
    BigInt m;
    // full-node leftmost position attaining m given entering excess
    BigInt full(std::uint32_t n, const BigInt& e_before) {
      BigInt e = e_before, off = 0;
      std::uint32_t cur = n;
      for (;;) {
        bool descended = false;
        for (const auto& item : self->g_.rhs(cur)) {
          Stats st = self->stats_of(item);
          if (st.len == 0) continue;
          if (st.minp && e + *st.minp <= m) {
            if (std::holds_alternative<TermSymbol>(item)) return off + 1;
            cur = std::get<NtRef>(item).id;
            descended = true;
            break;
          }
          e += st.total;
          off += st.len;
        }
        if (!descended) raise(Errc::OutOfRange, "min position lost");
      }
    }
    std::optional<BigInt> run(std::uint32_t n, const BigInt& lo, const BigInt& hi,
                              const BigInt& e_before, BigInt* e_out) {
      BigInt off = 0;
      BigInt e = e_before;
      for (const auto& item : self->g_.rhs(n)) {
        Stats st = self->stats_of(item);
        if (st.len == 0) continue;
        if (off + st.len < lo) {
          off += st.len;
          continue;
        }
        if (off >= hi) break;
        BigInt a = lo - off;
        if (a < 1) a = 1;
        BigInt b = hi - off;
        if (b > st.len) b = st.len;
        if (a == 1 && b == st.len) {
          if (e + *st.minp == m) {
            if (std::holds_alternative<TermSymbol>(item)) return off + 1;
            return off + full(std::get<NtRef>(item).id, e);
          }
          e += st.total;
        } else if (std::holds_alternative<TermSymbol>(item)) {
          e += st.total;
          if (e == m) return off + 1;
        } else {
          BigInt e2;
          auto sub = run(std::get<NtRef>(item).id, a, b, e, &e2);
          if (sub) return off + *sub;
          e = std::move(e2);
        }
        off += st.len;
      }
      if (e_out != nullptr) *e_out = e;
      return std::nullopt;
    }
  };
  Impl impl{this, m};
  auto res = impl.run(node, lo, hi, e, nullptr);
  if (!res) raise(Errc::OutOfRange, "range minimum not attained");
  return *res;
}

BigInt BpSlp::rmqi(const BigInt& k, const BigInt& j) const {
  if (k < 1 || j > length() || k > j) raise(Errc::OutOfRange, "[" + k.str() + "," + j.str() + "]");
  BigInt e_before = excess(k - 1);
  BigInt m = range_min(g_.start(), k, j, e_before);
  return leftmost_at_min(g_.start(), k, j, e_before, m);
}

// --- DFUDS -------------------------------------------------------------------

Slp dfuds_grammar(const Slp& tree) {
  require_valid(tree);
  Slp out;
  for (std::uint32_t id = 0; id < tree.nt_count(); ++id) out.add_nonterminal(tree.nt_name(id));
  for (std::uint32_t id = 0; id < tree.nt_count(); ++id) {
    std::vector<RhsItem> items;
    for (const auto& item : tree.rhs(id)) {
      if (const TermSymbol* t = std::get_if<TermSymbol>(&item)) {
        for (int d = 0; d < t->rank(); ++d) items.push_back(item_term(BpSlp::open_sym()));
        items.push_back(item_term(BpSlp::close_sym()));
      } else {
        items.push_back(item);
      }
    }
    out.set_production(id, std::move(items));
  }
  std::uint32_t s = out.fresh_nonterminal("DFUDS");
  out.set_production(s, {item_term(BpSlp::open_sym()), item_nt(tree.start())});
  out.set_start(s);
  return out;
}

DfudsIndex::DfudsIndex(Slp tree) : tree_(std::move(tree)), bp_(dfuds_grammar(tree_)) {
  require_tree(tree_);
  ValidationReport rep = require_valid(tree_);
  tree_lens_ = std::move(rep.lengths);
  n_ = tree_lens_[tree_.start()];
}

void DfudsIndex::check_node(const BigInt& i) const {
  if (i < 1 || i > n_) raise(Errc::OutOfRange, "node " + i.str());
}

BigInt DfudsIndex::pos_of_node(const BigInt& i) const {
  check_node(i);
  if (i == 1) return 2;
  return bp_.select_close(i - 1) + 1;
}

TermSymbol DfudsIndex::label_at(const BigInt& i) const {
  check_node(i);
  BigInt rem = i;
  std::uint32_t node = tree_.start();
  for (;;) {
    for (const auto& item : tree_.rhs(node)) {
      if (const TermSymbol* t = std::get_if<TermSymbol>(&item)) {
        if (rem == 1) return *t;
        rem -= 1;
      } else {
        std::uint32_t id = std::get<NtRef>(item).id;
        if (rem <= tree_lens_[id]) {
          node = id;
          break;
        }
        rem -= tree_lens_[id];
      }
    }
  }
}

BigInt DfudsIndex::degree(const BigInt& i) const {
  return bp_.select_close(i) - pos_of_node(i);
}

BigInt DfudsIndex::parent(const BigInt& i) const {
  check_node(i);
  if (i == 1) raise(Errc::IsRoot, "node 1");
  BigInt u = bp_.findopen(pos_of_node(i) - 1);
  return bp_.rank_close(u) + 1;
}

BigInt DfudsIndex::kth_child(const BigInt& i, const BigInt& k) const {
  check_node(i);
  if (k < 1) raise(Errc::NoSuchChild, "k = " + k.str());
  BigInt y = bp_.select_close(i);
  BigInt d = y - pos_of_node(i);
  if (k > d) raise(Errc::NoSuchChild, "node " + i.str() + " has " + d.str() + " children");
  BigInt c = bp_.findclose(y - k);
  return bp_.rank_close(c) + 1;
}

BigInt DfudsIndex::child_rank(const BigInt& i) const {
  check_node(i);
  if (i == 1) raise(Errc::IsRoot, "node 1");
  BigInt u = bp_.findopen(pos_of_node(i) - 1);
  BigInt p = bp_.rank_close(u) + 1;
  return bp_.select_close(p) - u;
}

BigInt DfudsIndex::subtree_size(const BigInt& i) const {
  check_node(i);
  BigInt v = pos_of_node(i);
  BigInt z = bp_.fwd_search(v - 1, bp_.excess(v - 1) - 1);
  return bp_.rank_close(z) - i + 1;
}

bool DfudsIndex::is_ancestor(const BigInt& i, const BigInt& j) const {
  return i <= j && j <= i + subtree_size(i) - 1;
}

BigInt DfudsIndex::lca(const BigInt& i, const BigInt& j) const {
  check_node(i);
  check_node(j);
  const BigInt& a = i <= j ? i : j;
  const BigInt& b = i <= j ? j : i;
  if (is_ancestor(a, b)) return a;
  // b is not in a's subtree: the leftmost excess minimum over
  // [close(a), pos(b)-1] ends the region of the child of lca(a,b) preceding
  // the child whose subtree holds b.
  BigInt q = bp_.rmqi(bp_.select_close(a), bp_.select_close(b - 1));
  BigInt child = bp_.rank_close(q) + 1;
  return parent(child);
}

bool DfudsIndex::subtree_matches(const BigInt& i, const TermTree& pattern) const {
  check_node(i);
  // Well-formedness: terminal arities respected, parameters linear.
  {
    std::vector<int> seen;
    std::vector<const TermTree*> stack{&pattern};
    while (!stack.empty()) {
      const TermTree* n = stack.back();
      stack.pop_back();
      if (n->is_nt()) raise(Errc::ParseError, "pattern may not contain nonterminals");
      if (n->is_param()) {
        int idx = std::get<ParamRef>(n->label).index;
        if (!n->children.empty()) raise(Errc::RankMismatch, "parameter with children");
        for (int s : seen)
          if (s == idx) raise(Errc::ParameterRepeated, "x" + std::to_string(idx));
        seen.push_back(idx);
      } else {
        const TermSymbol& sym = std::get<TermSymbol>(n->label);
        if (static_cast<int>(n->children.size()) != sym.rank())
          raise(Errc::RankMismatch, sym.str());
      }
      for (const auto& c : n->children) stack.push_back(&c);
    }
  }

  BigInt cursor = i;
  std::function<bool(const TermTree&)> walk = [&](const TermTree& node) -> bool {
    if (node.is_param()) {
      cursor += subtree_size(cursor);
      return true;
    }
    const TermSymbol& sym = std::get<TermSymbol>(node.label);
    if (!(label_at(cursor) == sym)) return false;
    cursor += 1;
    for (const auto& c : node.children)
      if (!walk(c)) return false;
    return true;
  };
  return walk(pattern);
}

}  // namespace slpt
