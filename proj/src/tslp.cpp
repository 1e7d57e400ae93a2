#include "slpt/tslp.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "slpt/slp_ops.hpp"
#include "slpt/tree_shape.hpp"

namespace slpt {

namespace {

std::size_t count_nonparam(const TermTree& t) {
  std::size_t n = t.is_param() ? 0 : 1;
  for (const auto& c : t.children) n += count_nonparam(c);
  return n;
}

}  // namespace

std::size_t Tslp::size() const {
  std::size_t n = 0;
  for (std::uint32_t i = 0; i < nt_count(); ++i)
    if (defined(i)) n += count_nonparam(rhs(i));
  return n;
}

std::string TslpValidationReport::describe() const {
  if (ok) return "valid";
  std::string out;
  for (const auto& i : issues) {
    if (!out.empty()) out += "; ";
    out += std::string(errc_name(i.kind)) + "(" + i.nonterminal + ")";
  }
  return out;
}

TslpValidationReport validate_tslp(const Tslp& t) {
  TslpValidationReport rep;
  const std::size_t n = t.nt_count();
  if (n == 0) {
    rep.issues.push_back({Errc::MissingProduction, "<no nonterminals>"});
    return rep;
  }
  for (std::uint32_t i = 0; i < n; ++i)
    if (!t.defined(i)) rep.issues.push_back({Errc::UnknownNonterminal, t.nt_name(i)});
  if (!rep.issues.empty()) return rep;
  if (t.rank_of(t.start()) != 0)
    rep.issues.push_back({Errc::RankMismatch, t.nt_name(t.start()) + " (start must have rank 0)"});

  // Per-production structural checks.
  for (std::uint32_t a = 0; a < n; ++a) {
    std::set<int> seen_params;
    std::function<void(const TermTree&)> walk = [&](const TermTree& node) {
      int want = 0;
      if (node.is_param()) {
        int idx = std::get<ParamRef>(node.label).index;
        if (idx < 1 || idx > t.rank_of(a))
          rep.issues.push_back({Errc::RankMismatch,
                                t.nt_name(a) + " uses x" + std::to_string(idx)});
        else if (!seen_params.insert(idx).second)
          rep.issues.push_back({Errc::ParameterRepeated,
                                t.nt_name(a) + " repeats x" + std::to_string(idx)});
      } else if (node.is_term()) {
        want = std::get<TermSymbol>(node.label).rank();
      } else {
        want = t.rank_of(std::get<TslpNtRef>(node.label).id);
      }
      if (static_cast<int>(node.children.size()) != want)
        rep.issues.push_back({Errc::RankMismatch, t.nt_name(a)});
      for (const auto& c : node.children) walk(c);
    };
    walk(t.rhs(a));
  }
  if (!rep.issues.empty()) return rep;

  // Acyclicity over the nonterminal-reference relation.
  enum : unsigned char { White, Gray, Black };
  std::vector<unsigned char> color(n, White);
  bool cyclic = false;
  std::function<void(std::uint32_t)> dfs = [&](std::uint32_t a) {
    color[a] = Gray;
    std::function<void(const TermTree&)> walk = [&](const TermTree& node) {
      if (cyclic) return;
      if (node.is_nt()) {
        std::uint32_t b = std::get<TslpNtRef>(node.label).id;
        if (color[b] == Gray) {
          rep.issues.push_back({Errc::CyclicGrammar, t.nt_name(b)});
          cyclic = true;
          return;
        }
        if (color[b] == White) dfs(b);
      }
      for (const auto& c : node.children) walk(c);
    };
    walk(t.rhs(a));
    color[a] = Black;
    rep.topo_order.push_back(a);
  };
  for (std::uint32_t a = 0; a < n && !cyclic; ++a)
    if (color[a] == White) dfs(a);
  if (cyclic) {
    rep.topo_order.clear();
    return rep;
  }
  rep.ok = true;
  return rep;
}

TslpValidationReport require_valid_tslp(const Tslp& t) {
  TslpValidationReport rep = validate_tslp(t);
  if (!rep.ok) {
    const auto& first = rep.issues.at(0);
    raise(first.kind, first.nonterminal);
  }
  return rep;
}

TermTree tslp_expand(const Tslp& t, std::uint64_t limit) {
  TslpValidationReport rep = require_valid_tslp(t);

  // Which parameters survive into val(A), and how many terminal nodes val(A)
  // has when the surviving parameters are left as holes. Unused parameters
  // delete their argument subtrees, so sizes are computed with use-sets.
  const std::size_t n = t.nt_count();
  std::vector<std::set<int>> used(n);
  std::vector<BigInt> sz(n, BigInt(0));
  std::function<BigInt(std::uint32_t, const TermTree&, std::set<int>&)> size_tree =
      [&](std::uint32_t owner, const TermTree& node, std::set<int>& uses) -> BigInt {
    if (node.is_param()) {
      uses.insert(std::get<ParamRef>(node.label).index);
      return 0;
    }
    if (node.is_term()) {
      BigInt s = 1;
      for (const auto& c : node.children) s += size_tree(owner, c, uses);
      return s;
    }
    std::uint32_t b = std::get<TslpNtRef>(node.label).id;
    BigInt s = sz[b];
    for (int i = 1; i <= t.rank_of(b); ++i) {
      if (used[b].count(i)) s += size_tree(owner, node.children[i - 1], uses);
    }
    return s;
  };
  for (std::uint32_t a : rep.topo_order) {
    std::set<int> uses;
    sz[a] = size_tree(a, t.rhs(a), uses);
    used[a] = std::move(uses);
  }
  if (sz[t.start()] > BigInt(limit)) raise(Errc::ExpansionTooLarge, sz[t.start()].str());

  std::function<TermTree(std::uint32_t, const std::vector<TermTree>&)> expand_nt_fn =
      [&](std::uint32_t a, const std::vector<TermTree>& args) -> TermTree {
    std::function<TermTree(const TermTree&)> subst = [&](const TermTree& node) -> TermTree {
      if (node.is_param()) return args[std::get<ParamRef>(node.label).index - 1];
      if (node.is_term()) {
        TermTree out = TermTree::leaf(std::get<TermSymbol>(node.label));
        out.children.reserve(node.children.size());
        for (const auto& c : node.children) out.children.push_back(subst(c));
        return out;
      }
      std::uint32_t b = std::get<TslpNtRef>(node.label).id;
      std::vector<TermTree> bargs;
      bargs.reserve(node.children.size());
      for (const auto& c : node.children) bargs.push_back(subst(c));
      return expand_nt_fn(b, bargs);
    };
    return subst(t.rhs(a));
  };
  return expand_nt_fn(t.start(), {});
}

Slp tslp_to_slp(const Tslp& t) {
  TslpValidationReport rep = require_valid_tslp(t);
  Slp out;

  // Per TSLP nonterminal: the traversal of val(A) split at its parameter
  // occurrences. pieces[i] is a single reference to a materialized piece
  // nonterminal (or empty); params lists the parameter indices in order of
  // appearance.
  struct Segments {
    std::vector<std::vector<RhsItem>> pieces;
    std::vector<int> params;
  };
  std::vector<Segments> seg(t.nt_count());

  std::function<Segments(std::uint32_t, const TermTree&)> of_tree =
      [&](std::uint32_t owner, const TermTree& node) -> Segments {
    if (node.is_param())
      return Segments{{{}, {}}, {std::get<ParamRef>(node.label).index}};
    Segments acc;
    if (node.is_term()) {
      acc.pieces.push_back({item_term(std::get<TermSymbol>(node.label))});
      for (const auto& c : node.children) {
        Segments cs = of_tree(owner, c);
        // join: last piece of acc ++ first piece of cs
        auto& last = acc.pieces.back();
        last.insert(last.end(), cs.pieces.front().begin(), cs.pieces.front().end());
        for (std::size_t i = 0; i < cs.params.size(); ++i) {
          acc.params.push_back(cs.params[i]);
          acc.pieces.push_back(std::move(cs.pieces[i + 1]));
        }
      }
      return acc;
    }
    std::uint32_t b = std::get<TslpNtRef>(node.label).id;
    const Segments& sb = seg[b];
    acc.pieces.push_back(sb.pieces.front());
    for (std::size_t j = 0; j < sb.params.size(); ++j) {
      Segments arg = of_tree(owner, node.children[sb.params[j] - 1]);
      auto& last = acc.pieces.back();
      last.insert(last.end(), arg.pieces.front().begin(), arg.pieces.front().end());
      for (std::size_t i = 0; i < arg.params.size(); ++i) {
        acc.params.push_back(arg.params[i]);
        acc.pieces.push_back(std::move(arg.pieces[i + 1]));
      }
      auto& last2 = acc.pieces.back();
      last2.insert(last2.end(), sb.pieces[j + 1].begin(), sb.pieces[j + 1].end());
    }
    return acc;
  };

  for (std::uint32_t a : rep.topo_order) {
    Segments raw = of_tree(a, t.rhs(a));
    // Materialize nonempty pieces so later splices share them.
    Segments mat;
    mat.params = raw.params;
    for (std::size_t i = 0; i < raw.pieces.size(); ++i) {
      if (raw.pieces[i].empty()) {
        mat.pieces.push_back({});
      } else {
        std::uint32_t p =
            out.fresh_nonterminal(t.nt_name(a) + "#" + std::to_string(i));
        out.set_production(p, std::move(raw.pieces[i]));
        mat.pieces.push_back({item_nt(p)});
      }
    }
    seg[a] = std::move(mat);
  }

  const Segments& s = seg[t.start()];
  std::uint32_t root = out.fresh_nonterminal(t.nt_name(t.start()) + "#slp");
  out.set_production(root, s.pieces.front());
  out.set_start(root);
  return out;
}

Tslp slp_to_tslp(const Slp& input, std::uint64_t work_limit) {
  require_tree(input);
  Slp slp = normalize_cnf(input);
  ValidationReport rep = require_valid(slp);
  std::vector<TreeShape> shapes = compute_shapes(slp);

  Tslp out;
  // Per SLP nonterminal: resolved TSLP nonterminals for its full trees and
  // its fragment. Chains are never materialized, which is exactly the
  // chain-elimination pass.
  struct Parts {
    std::vector<std::uint32_t> trees;
    std::optional<std::uint32_t> frag;
  };
  std::vector<Parts> parts(slp.nt_count());
  std::uint64_t work = 0;
  auto charge = [&](std::uint64_t units) {
    work += units;
    if (work > work_limit) raise(Errc::TooLarge, "TSLP construction exceeds work limit");
  };

  auto tree_ref = [&](std::uint32_t id) { return TermTree{TslpNtRef{id}, {}}; };

  for (std::uint32_t a : rep.topo_order) {
    const auto& items = slp.rhs(a);
    Parts p;
    if (items.size() == 1 && std::holds_alternative<TermSymbol>(items[0])) {
      const TermSymbol& f = std::get<TermSymbol>(items[0]);
      if (f.rank() == 0) {
        std::uint32_t nt = out.add_nonterminal(slp.nt_name(a) + "_t1", 0);
        out.set_production(nt, TermTree::leaf(f));
        p.trees.push_back(nt);
      } else {
        std::uint32_t nt = out.add_nonterminal(slp.nt_name(a) + "_fr", f.rank());
        TermTree rhs = TermTree::leaf(f);
        for (int i = 1; i <= f.rank(); ++i) rhs.children.push_back(TermTree::param(i));
        out.set_production(nt, std::move(rhs));
        p.frag = nt;
      }
    } else {
      std::uint32_t bid = std::get<NtRef>(items.at(0)).id;
      std::uint32_t cid = std::get<NtRef>(items.at(1)).id;
      const Parts& B = parts[bid];
      const Parts& C = parts[cid];
      const BigInt& b2big = shapes[bid].gaps;
      const BigInt& c1big = shapes[cid].full;
      const BigInt& c2big = shapes[cid].gaps;
      charge(B.trees.size() + C.trees.size() + 4);
      if (b2big == 0) {
        // Case 1: B contributes only full trees.
        p.trees = B.trees;
        p.trees.insert(p.trees.end(), C.trees.begin(), C.trees.end());
        p.frag = C.frag;
      } else if (b2big <= c1big) {
        // Case 2: the first b2 trees of C close B's fragment.
        std::size_t b2 = static_cast<std::size_t>(b2big);
        p.trees = B.trees;
        std::uint32_t nt = out.add_nonterminal(slp.nt_name(a) + "_t", 0);
        TermTree rhs = tree_ref(*B.frag);
        for (std::size_t i = 0; i < b2; ++i) rhs.children.push_back(tree_ref(C.trees[i]));
        out.set_production(nt, std::move(rhs));
        p.trees.push_back(nt);
        p.trees.insert(p.trees.end(), C.trees.begin() + b2, C.trees.end());
        p.frag = C.frag;
      } else {
        // Case 3: everything C produces sinks into B's gaps.
        BigInt d_big = b2big - c1big;
        BigInt rank_big = c2big == 0 ? d_big : BigInt(c2big + d_big - 1);
        if (rank_big > BigInt(work_limit)) raise(Errc::TooLarge, "fragment rank too large");
        int c1 = static_cast<int>(c1big);
        int c2 = static_cast<int>(c2big);
        int d = static_cast<int>(d_big);
        charge(static_cast<std::uint64_t>(c1) + c2 + d + 1);
        p.trees = B.trees;
        int rank = c2 == 0 ? d : c2 + d - 1;
        std::uint32_t nt = out.add_nonterminal(slp.nt_name(a) + "_fr", rank);
        TermTree rhs = tree_ref(*B.frag);
        for (int i = 0; i < c1; ++i) rhs.children.push_back(tree_ref(C.trees[i]));
        if (c2 == 0) {
          for (int i = 1; i <= d; ++i) rhs.children.push_back(TermTree::param(i));
        } else {
          TermTree inner = tree_ref(*C.frag);
          for (int i = 1; i <= c2; ++i) inner.children.push_back(TermTree::param(i));
          rhs.children.push_back(std::move(inner));
          for (int i = c2 + 1; i <= c2 + d - 1; ++i) rhs.children.push_back(TermTree::param(i));
        }
        out.set_production(nt, std::move(rhs));
        p.frag = nt;
      }
    }
    charge(p.trees.size() + 1);
    parts[a] = std::move(p);
  }

  const Parts& sp = parts[slp.start()];
  out.set_start(sp.trees.at(0));

  // Restrict to nonterminals reachable from the start.
  Tslp pruned;
  std::vector<std::int64_t> map(out.nt_count(), -1);
  std::function<std::uint32_t(std::uint32_t)> copy_nt = [&](std::uint32_t id) -> std::uint32_t {
    if (map[id] >= 0) return static_cast<std::uint32_t>(map[id]);
    std::uint32_t nid = pruned.add_nonterminal(out.nt_name(id), out.rank_of(id));
    map[id] = nid;
    std::function<TermTree(const TermTree&)> conv = [&](const TermTree& node) -> TermTree {
      TermTree r = node;
      r.children.clear();
      if (node.is_nt())
        r.label = TslpNtRef{copy_nt(std::get<TslpNtRef>(node.label).id)};
      for (const auto& c : node.children) r.children.push_back(conv(c));
      return r;
    };
    pruned.set_production(nid, conv(out.rhs(id)));
    return nid;
  };
  pruned.set_start(copy_nt(out.start()));
  return pruned;
}

BigInt max_full_trees_in_factor(const Slp& slp) {
  require_tree(slp);
  ValidationReport rep = require_valid(slp);
  std::vector<TreeShape> shapes = compute_shapes(slp);
  std::vector<bool> reach(slp.nt_count(), false);
  std::vector<std::uint32_t> stack{slp.start()};
  reach[slp.start()] = true;
  BigInt best = 0;
  while (!stack.empty()) {
    std::uint32_t a = stack.back();
    stack.pop_back();
    best = std::max(best, shapes[a].full);
    for (const auto& item : slp.rhs(a))
      if (const NtRef* r = std::get_if<NtRef>(&item))
        if (!reach[r->id]) {
          reach[r->id] = true;
          stack.push_back(r->id);
        }
  }
  return best;
}

}  // namespace slpt
