#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "slpt/tslp.hpp"
#include "slpt/slp_ops.hpp"
#include "slpt/text_format.hpp"
#include "slpt/tree_shape.hpp"
#include "oracles.hpp"

using namespace slpt;
using namespace slpt::testing;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::ParseError;
}

std::string word_str(const std::vector<TermSymbol>& w) {
  std::string s;
  for (const auto& t : w) s += t.str();
  return s;
}

// random linear TSLP over {f:2, g:1, a:0, b:0}
Tslp random_tslp(Rng& rng, int nts) {
  Tslp t;
  TermSymbol f = TermSymbol::ranked("f", 2);
  TermSymbol g = TermSymbol::ranked("g", 1);
  TermSymbol a = TermSymbol::ranked("a", 0);
  TermSymbol b = TermSymbol::ranked("b", 0);
  struct Decl {
    std::uint32_t id;
    int rank;
  };
  std::vector<Decl> decls;
  for (int i = nts; i >= 1; --i) {
    int rank = static_cast<int>(rng() % 3);
    std::uint32_t id = t.add_nonterminal("N" + std::to_string(i), rank);
    // rhs over terminals, later-declared nonterminals, params (each once)
    std::vector<int> params;
    for (int p = 1; p <= rank; ++p) params.push_back(p);
    std::shuffle(params.begin(), params.end(), rng);
    std::size_t pi = 0;
    int budget = 2 + static_cast<int>(rng() % 5);
    std::function<TermTree(bool)> gen = [&](bool allow_params) -> TermTree {
      bool need_params = pi < params.size();
      if (budget <= 0 || (rng() % 3 == 0 && !need_params)) {
        return TermTree::leaf(rng() % 2 ? a : b);
      }
      --budget;
      if (allow_params && need_params && rng() % 2 == 0) {
        return TermTree::param(params[pi++]);
      }
      if (!decls.empty() && rng() % 3 == 0) {
        const Decl& d = decls[rng() % decls.size()];
        TermTree node{TslpNtRef{d.id}, {}};
        for (int c = 0; c < d.rank; ++c) node.children.push_back(gen(allow_params));
        return node;
      }
      if (rng() % 2 == 0) {
        TermTree node = TermTree::leaf(f);
        node.children.push_back(gen(allow_params));
        node.children.push_back(gen(allow_params));
        return node;
      }
      TermTree node = TermTree::leaf(g);
      node.children.push_back(gen(allow_params));
      return node;
    };
    TermTree rhs = gen(true);
    // force unused params in: wrap with f(..., param) chains
    while (pi < params.size()) {
      TermTree node = TermTree::leaf(f);
      node.children.push_back(std::move(rhs));
      node.children.push_back(TermTree::param(params[pi++]));
      rhs = std::move(node);
    }
    t.set_production(id, std::move(rhs));
    decls.push_back({id, rank});
  }
  // start: fresh rank-0 wrapping the last declared
  std::uint32_t s = t.add_nonterminal("S0", 0);
  const Decl& top = decls.back();
  TermTree root{TslpNtRef{top.id}, {}};
  for (int c = 0; c < top.rank; ++c) root.children.push_back(TermTree::leaf(a));
  t.set_production(s, std::move(root));
  t.set_start(s);
  return t;
}

std::size_t tree_height(const std::vector<TermSymbol>& w) {
  PointerTree pt = PointerTree::build(w);
  std::size_t h = 0;
  for (std::size_t i = 1; i <= pt.n; ++i) h = std::max(h, pt.depth[i]);
  return h;
}

int max_rank(const std::vector<TermSymbol>& w) {
  int r = 0;
  for (const auto& s : w) r = std::max(r, s.rank());
  return r;
}

}  // namespace

TEST_CASE("validate_tslp: dag style ok, repeated parameter, rank mismatch") {
  Tslp ok = parse_tslp_text(
      "alphabet f:2 a:0\n"
      "S -> f A A\n"
      "A -> a\n"
      "start S\n");
  CHECK(validate_tslp(ok).ok);

  Tslp rep;
  std::uint32_t d = rep.add_nonterminal("D", 1);
  TermTree rhs = TermTree::leaf(TermSymbol::ranked("f", 2));
  rhs.children.push_back(TermTree::param(1));
  rhs.children.push_back(TermTree::param(1));
  rep.set_production(d, rhs);
  std::uint32_t s = rep.add_nonterminal("S", 0);
  TermTree call{TslpNtRef{d}, {TermTree::leaf(TermSymbol::ranked("a", 0))}};
  rep.set_production(s, call);
  rep.set_start(s);
  auto report = validate_tslp(rep);
  REQUIRE_FALSE(report.ok);
  CHECK(report.issues[0].kind == Errc::ParameterRepeated);

  Tslp mism;
  std::uint32_t u = mism.add_nonterminal("U", 1);
  TermTree urhs = TermTree::leaf(TermSymbol::ranked("g", 1));
  urhs.children.push_back(TermTree::param(1));
  mism.set_production(u, urhs);
  std::uint32_t s2 = mism.add_nonterminal("S", 0);
  TermTree bad{TslpNtRef{u}, {TermTree::leaf(TermSymbol::ranked("a", 0)),
                              TermTree::leaf(TermSymbol::ranked("a", 0))}};
  mism.set_production(s2, bad);
  mism.set_start(s2);
  auto report2 = validate_tslp(mism);
  REQUIRE_FALSE(report2.ok);
  CHECK(report2.issues[0].kind == Errc::RankMismatch);
}

TEST_CASE("tslp_expand: value and limit") {
  Tslp t = parse_tslp_text("alphabet f:2 a:0\nS -> f A A\nA -> a\nstart S\n");
  TermTree v = tslp_expand(t, 100);
  CHECK(term_str(v) == "f(a,a)");

  // doubling TSLP of depth 40 overflows any sane limit
  Tslp big;
  TermSymbol f = TermSymbol::ranked("f", 2);
  std::uint32_t prev = big.add_nonterminal("D0", 0);
  big.set_production(prev, TermTree::leaf(TermSymbol::ranked("a", 0)));
  for (int i = 1; i <= 40; ++i) {
    std::uint32_t cur = big.add_nonterminal("D" + std::to_string(i), 0);
    TermTree rhs = TermTree::leaf(f);
    rhs.children.push_back(TermTree{TslpNtRef{prev}, {}});
    rhs.children.push_back(TermTree{TslpNtRef{prev}, {}});
    big.set_production(cur, rhs);
    prev = cur;
  }
  big.set_start(prev);
  CHECK(code_of([&] { tslp_expand(big, 1u << 20); }) == Errc::ExpansionTooLarge);
}

TEST_CASE("tslp_to_slp: fixed points") {
  Tslp t = parse_tslp_text("alphabet f:2 a:0\nS -> f A A\nA -> a\nstart S\n");
  CHECK(word_str(expand(tslp_to_slp(t), 100)) == "faa");

  // comb-like TSLP: S -> C($), C(x1) -> f1 f0 x1 1 0  i.e. f1(f0(x1,1),0)
  Tslp comb = parse_tslp_text(
      "alphabet f0:2 f1:2 0:0 1:0 $:0\n"
      "S -> C $\n"
      "C(x1) -> f1 f0 x1 1 0\n"
      "start S\n");
  CHECK(traversal_str(expand(tslp_to_slp(comb), 100)) == "f1 f0 $ 1 0");
}

TEST_CASE("tslp roundtrip through text format") {
  Rng rng(11);
  for (int iter = 0; iter < 40; ++iter) {
    Tslp t = random_tslp(rng, 2 + static_cast<int>(rng() % 5));
    REQUIRE(validate_tslp(t).ok);
    Tslp back = parse_tslp_text(tslp_text(t));
    CHECK(preorder_of(tslp_expand(back, 1u << 22)) == preorder_of(tslp_expand(t, 1u << 22)));
  }
}

TEST_CASE("tslp_to_slp equals traversal of tslp_expand on random TSLPs") {
  Rng rng(12);
  std::size_t worst_num = 0, worst_den = 1;
  for (int iter = 0; iter < 120; ++iter) {
    Tslp t = random_tslp(rng, 2 + static_cast<int>(rng() % 6));
    auto tree = preorder_of(tslp_expand(t, 1u << 22));
    Slp g = tslp_to_slp(t);
    CHECK(expand(g, 1u << 22) == tree);
    CHECK(is_tree(g));
    int r = std::max(1, max_rank(tree));
    if (g.size() * worst_den > worst_num * (t.size() * r)) {
      worst_num = g.size();
      worst_den = t.size() * r;
    }
  }
  MESSAGE("|slp| <= C1 * |tslp| * r with C1 ~ ", worst_num, "/", worst_den);
  CHECK(worst_num <= 8 * worst_den);
}

TEST_CASE("slp_to_tslp: fixed points") {
  RankedAlphabet fa;
  fa.add("f", 2);
  fa.add("a", 0);
  Slp faa = literal_slp(parse_traversal("f a a", fa, false));
  Tslp t = slp_to_tslp(faa);
  REQUIRE(validate_tslp(t).ok);
  CHECK(term_str(tslp_expand(t, 100)) == "f(a,a)");

  // the running example tree in term form
  std::vector<TermSymbol> ex1 = parse_traversal("f f a a f f f a a a a", fa, false);
  for (auto algo : {CompressAlgo::Bisection, CompressAlgo::Pairing}) {
    Tslp te = slp_to_tslp(compress(ex1, algo));
    REQUIRE(validate_tslp(te).ok);
    CHECK(term_str(tslp_expand(te, 100)) == "f(f(a,a),f(f(f(a,a),a),a))");
  }

  CHECK(code_of([&] { slp_to_tslp(literal_slp(parse_traversal("f a", fa, false))); }) ==
        Errc::NotATree);
}

TEST_CASE("slp_to_tslp on random tree SLPs: roundtrip and size bound") {
  Rng rng(13);
  std::size_t worst_num = 0, worst_den = 1;
  for (int iter = 0; iter < 150; ++iter) {
    RankedAlphabet alpha = test_alphabet(1 + rng() % 3, 2);
    std::size_t n = 1 + rng() % 250;
    auto w = random_tree_word(rng, alpha, n);
    Slp g = random_slp_for(rng, w);
    Tslp t = slp_to_tslp(g);
    REQUIRE(validate_tslp(t).ok);
    CHECK(preorder_of(tslp_expand(t, 1u << 22)) == w);
    std::size_t m = normalize_cnf(g).size();
    std::size_t h = std::max<std::size_t>(1, tree_height(w));
    std::size_t r = static_cast<std::size_t>(std::max(1, max_rank(w)));
    std::size_t bound = m * h * r;
    if (t.size() * worst_den > worst_num * bound) {
      worst_num = t.size();
      worst_den = bound;
    }
  }
  MESSAGE("|tslp| <= C2 * m * h * r with C2 ~ ", worst_num, "/", worst_den);
  CHECK(worst_num <= 8 * worst_den);
}

TEST_CASE("full roundtrip tslp -> slp -> tslp preserves the tree") {
  Rng rng(14);
  for (int iter = 0; iter < 60; ++iter) {
    Tslp t = random_tslp(rng, 2 + static_cast<int>(rng() % 5));
    auto tree = preorder_of(tslp_expand(t, 1u << 22));
    Tslp back = slp_to_tslp(tslp_to_slp(t));
    CHECK(preorder_of(tslp_expand(back, 1u << 22)) == tree);
  }
}

TEST_CASE("max_full_trees_in_factor stays within h*r") {
  Rng rng(15);
  for (int iter = 0; iter < 60; ++iter) {
    RankedAlphabet alpha = test_alphabet(1 + rng() % 3, 2);
    std::size_t n = 1 + rng() % 300;
    auto w = random_tree_word(rng, alpha, n);
    Slp g = normalize_cnf(random_slp_for(rng, w));
    BigInt got = max_full_trees_in_factor(g);
    std::size_t h = std::max<std::size_t>(1, tree_height(w));
    int r = std::max(1, max_rank(w));
    CHECK(got <= BigInt(h) * r);
  }
  // single-node tree
  Slp single = literal_slp({TermSymbol::ranked("a", 0)});
  BigInt v = max_full_trees_in_factor(single);
  CHECK(v >= 0);
  CHECK(v <= 1);
}
