#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "slpt/evaluate.hpp"
#include "slpt/slp_ops.hpp"
#include "slpt/text_format.hpp"
#include "slpt/transducer.hpp"
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

Slp term_slp(const std::string& term) { return literal_slp(preorder_of(parse_term(term))); }

RankedAlphabet fa_alpha() {
  RankedAlphabet a;
  a.add("f", 2);
  a.add("a", 0);
  return a;
}

Slp running_example(CompressAlgo algo = CompressAlgo::Pairing) {
  return compress(parse_traversal("f f a a f f f a a a a", fa_alpha(), false), algo);
}

// random {and,or,0,1} tree of n internal nodes
std::vector<TermSymbol> random_bool_tree(Rng& rng, std::size_t n) {
  RankedAlphabet alpha;
  alpha.add("and", 2);
  alpha.add("or", 2);
  alpha.add("0", 0);
  alpha.add("1", 0);
  return random_tree_word(rng, alpha, 2 * n + 1);
}

// random caterpillar over ops with m operators; constants in [-cmax, cmax]
std::vector<TermSymbol> random_caterpillar(Rng& rng, const std::vector<TermSymbol>& ops,
                                           std::size_t m, long long cmax,
                                           bool nonnegative = false) {
  auto rand_const = [&] {
    long long lo = nonnegative ? 0 : -cmax;
    long long v = lo + static_cast<long long>(rng() % (cmax - lo + 1));
    return TermSymbol::int_const(v);
  };
  std::vector<TermSymbol> w;
  if (m == 0) {
    w.push_back(rand_const());
    return w;
  }
  std::function<void(std::size_t)> gen = [&](std::size_t rem) {
    w.push_back(ops[rng() % ops.size()]);
    if (rem == 1) {
      w.push_back(rand_const());
      w.push_back(rand_const());
      return;
    }
    if (rng() % 2 == 0) {
      gen(rem - 1);
      w.push_back(rand_const());
    } else {
      w.push_back(rand_const());
      gen(rem - 1);
    }
  };
  gen(m);
  return w;
}

std::size_t tree_height_of(const std::vector<TermSymbol>& w) {
  PointerTree pt = PointerTree::build(w);
  std::size_t h = 0;
  for (std::size_t i = 1; i <= pt.n; ++i) h = std::max(h, pt.depth[i]);
  return h;
}

// w^I: every maximal complete substring in T(F) replaced by its value.
std::vector<TermSymbol> naive_image(const std::vector<TermSymbol>& w,
                                    const Interpretation& interp) {
  std::vector<TermSymbol> out;
  std::size_t p = 0;
  while (p < w.size()) {
    long long need = 1;
    std::size_t q = p;
    bool complete = false;
    while (q < w.size()) {
      need = need - 1 + w[q].rank();
      ++q;
      if (need == 0) {
        complete = true;
        break;
      }
    }
    if (complete) {
      std::vector<TermSymbol> sub(w.begin() + p, w.begin() + q);
      out.push_back(TermSymbol::int_const(eval_brute(sub, interp)));
      p = q;
    } else {
      out.push_back(w[p]);
      p += 1;
    }
  }
  return out;
}

// random {ops, int consts} tree over binary operators only
std::vector<TermSymbol> random_op_tree(Rng& rng, const std::vector<TermSymbol>& ops,
                                       std::size_t internal, long long cmax) {
  RankedAlphabet shape_alpha;
  shape_alpha.add("o", 2);
  shape_alpha.add("c", 0);
  auto shape = random_tree_word(rng, shape_alpha, 2 * internal + 1);
  std::vector<TermSymbol> w;
  for (const auto& s : shape) {
    if (s.rank() == 0)
      w.push_back(TermSymbol::int_const(static_cast<long long>(rng() % (2 * cmax + 1)) - cmax));
    else
      w.push_back(ops[rng() % ops.size()]);
  }
  return w;
}

}  // namespace

TEST_CASE("eval_brute fixed points") {
  CHECK(eval_brute(preorder_of(parse_term("+(2,*(3,4))")), plus_times_interp()) == 14);
  CHECK(eval_brute(preorder_of(parse_term("7")), plus_times_interp()) == 7);
  CHECK(eval_brute(preorder_of(parse_term("and(1,or(0,1))")), bool_interp()) == 1);
  CHECK(eval_brute(preorder_of(parse_term("max(5,+(2,3))")), max_plus_interp()) == 5);
}

TEST_CASE("reduce_to_caterpillar with a brute oracle equals eval_brute") {
  Interpretation pt101 = plus_times_mod_interp(101);
  std::size_t calls = 0;
  BigInt v = reduce_to_caterpillar(term_slp("+(2,*(3,4))"), pt101, brute_oracle(pt101), &calls);
  CHECK(v == 14);

  // single constant: zero oracle calls
  calls = 99;
  CHECK(reduce_to_caterpillar(term_slp("7"), pt101, brute_oracle(pt101), &calls) == 7);
  CHECK(calls == 0);

  Rng rng(21);
  for (int iter = 0; iter < 60; ++iter) {
    auto w = random_bool_tree(rng, 1 + rng() % 40);
    Slp g = random_slp_for(rng, w);
    Interpretation bi = bool_interp();
    CHECK(reduce_to_caterpillar(g, bi, brute_oracle(bi)) == eval_brute(w, bi));
  }

  // not polynomially bounded -> refused
  CHECK(code_of([&] {
          Interpretation pt = plus_times_interp();
          reduce_to_caterpillar(term_slp("+(1,2)"), pt, brute_oracle(pt));
        }) == Errc::ValueTooLarge);
}

TEST_CASE("EvalPair invariant: values ++ fragment expands to val(A)^I") {
  Rng rng(22);
  Interpretation hi = height_interp();
  for (int iter = 0; iter < 25; ++iter) {
    RankedAlphabet alpha = test_alphabet(2, 2);
    auto w = random_tree_word(rng, alpha, 1 + rng() % 60);
    Slp g = random_slp_for(rng, w);
    ReduceTrace trace = reduce_to_caterpillar_traced(g, hi, brute_oracle(hi));
    for (std::uint32_t a = 0; a < trace.cnf.nt_count(); ++a) {
      auto word = expand_nt(trace.cnf, a, 1u << 20);
      std::vector<TermSymbol> image = naive_image(word, hi);
      const EvalPair& pair = trace.pairs[a];
      auto got = expand(pair.values, 1u << 20);
      auto fragment = expand(pair.fragment, 1u << 20);
      got.insert(got.end(), fragment.begin(), fragment.end());
      if (got != image) {
        CAPTURE(a);
        CAPTURE(traversal_str(word));
        CAPTURE(traversal_str(got));
        CAPTURE(traversal_str(image));
        FAIL("EvalPair mismatch");
      }
    }
  }
}

TEST_CASE("specialized chain evaluators agree with the generic reduction path") {
  // the generic reduction route (brute caterpillar oracle) doubles as
  // a cross-check for the specialized height/strahler algorithms
  Rng rng(20);
  Interpretation hi = height_interp(), si = strahler_interp();
  for (int iter = 0; iter < 40; ++iter) {
    RankedAlphabet alpha = test_alphabet(1 + rng() % 3, 2);
    auto w = random_tree_word(rng, alpha, 1 + rng() % 150);
    Slp g = random_slp_for(rng, w);
    // generic path: same zeroed leaves, brute oracle
    FunctionalTransducer zero(1, 0);
    for (const auto& sym : occurring_symbols(g)) {
      if (sym.rank() == 0)
        zero.add_transition(0, sym, 0, {TermSymbol::int_const(0)});
      else
        zero.add_transition(0, sym, 0, {sym});
    }
    Slp zeroed = apply_transducer(g, zero);
    CHECK(height(g) == reduce_to_caterpillar(zeroed, hi, brute_oracle(hi)));
    CHECK(strahler(g) == reduce_to_caterpillar(zeroed, si, brute_oracle(si)));
  }
}

TEST_CASE("height fixed points and oracle equivalence") {
  CHECK(height(running_example(CompressAlgo::Bisection)) == 4);
  CHECK(height(running_example(CompressAlgo::Pairing)) == 4);
  CHECK(height(literal_slp({TermSymbol::ranked("a", 0)})) == 0);

  // perfect binary tree of depth 20, never expanded
  Slp g;
  std::uint32_t prev = g.add_nonterminal("A0");
  g.set_production(prev, {item_term(TermSymbol::ranked("a", 0))});
  for (int i = 1; i <= 20; ++i) {
    std::uint32_t cur = g.add_nonterminal("A" + std::to_string(i));
    g.set_production(cur, {item_term(TermSymbol::ranked("f", 2)), item_nt(prev), item_nt(prev)});
    prev = cur;
  }
  g.set_start(prev);
  CHECK(height(g) == 20);

  Rng rng(23);
  for (int iter = 0; iter < 80; ++iter) {
    RankedAlphabet alpha = test_alphabet(1 + rng() % 3, 2);
    auto w = random_tree_word(rng, alpha, 1 + rng() % 200);
    CHECK(height(random_slp_for(rng, w)) == tree_height_of(w));
  }
}

TEST_CASE("node_depth: fixed points and oracle") {
  Slp ex1 = running_example();
  CHECK(node_depth(ex1, 1) == 0);
  CHECK(node_depth(ex1, 6) == 2);
  CHECK(node_depth(ex1, 8) == 4);
  CHECK(code_of([&] { node_depth(ex1, 12); }) == Errc::OutOfRange);

  Rng rng(24);
  for (int iter = 0; iter < 25; ++iter) {
    RankedAlphabet alpha = test_alphabet(2, 2);
    std::size_t n = 1 + rng() % 80;
    auto w = random_tree_word(rng, alpha, n);
    PointerTree pt = PointerTree::build(w);
    Slp g = random_slp_for(rng, w);
    for (int probe = 0; probe < 6; ++probe) {
      std::size_t i = 1 + rng() % n;
      CHECK(node_depth(g, i) == pt.depth[i]);
    }
  }
}

TEST_CASE("strahler fixed points and oracle equivalence") {
  CHECK(strahler(literal_slp({TermSymbol::ranked("a", 0)})) == 0);
  // perfect binary trees: strahler = height
  Slp g;
  std::uint32_t prev = g.add_nonterminal("A0");
  g.set_production(prev, {item_term(TermSymbol::ranked("a", 0))});
  for (int i = 1; i <= 10; ++i) {
    std::uint32_t cur = g.add_nonterminal("A" + std::to_string(i));
    g.set_production(cur, {item_term(TermSymbol::ranked("f", 2)), item_nt(prev), item_nt(prev)});
    prev = cur;
    g.set_start(prev);
    CHECK(strahler(g) == i);
  }

  Rng rng(25);
  Interpretation si = strahler_interp();
  for (int iter = 0; iter < 80; ++iter) {
    RankedAlphabet alpha = test_alphabet(1 + rng() % 3, 2);
    auto w = random_tree_word(rng, alpha, 1 + rng() % 200);
    CHECK(strahler(random_slp_for(rng, w)) == eval_brute(w, si));
  }
}

TEST_CASE("eval_bool: fixed points") {
  CHECK(eval_bool(term_slp("and(1,0)")) == 0);
  CHECK(eval_bool(term_slp("and(1,or(0,1))")) == 1);
  CHECK(eval_bool(term_slp("1")) == 1);
  CHECK(code_of([&] { eval_bool(term_slp("nand(1,0)")); }) == Errc::WrongAlphabet);
}

TEST_CASE("eval_bool: the Figure-4 caterpillar evaluates to 0 with zero fills") {
  // or(0, and(or(and(0, or(1, or(or(0, g1), g2))), g3), g4)) with gaps g* = 0,
  // spine read root-down: or0, and, or, and0, or1, or, or0.
  Slp g = term_slp("or(0,and(or(and(0,or(1,or(or(0,0),0))),0),0))");
  CHECK(eval_bool(g) == 0);
  CHECK(eval_brute(expand(g, 100), bool_interp()) == 0);
  // and with arbitrary fills the cut below and0 never changes the value of
  // that subtree
  Rng rng(26);
  for (int iter = 0; iter < 8; ++iter) {
    auto bit = [&] { return std::to_string(rng() % 2); };
    std::string term = "or(0,and(or(and(0,or(1,or(or(0," + bit() + ")," + bit() + "))),?),?))";
    std::string g3 = bit(), g4 = bit();
    term.replace(term.find('?'), 1, g3);
    term.replace(term.find('?'), 1, g4);
    Slp t = term_slp(term);
    CHECK(eval_bool(t) == static_cast<int>(eval_brute(expand(t, 100), bool_interp())));
  }
}

TEST_CASE("eval_bool agrees with eval_brute on random trees") {
  Rng rng(27);
  Interpretation bi = bool_interp();
  for (int iter = 0; iter < 120; ++iter) {
    auto w = random_bool_tree(rng, 1 + rng() % 150);
    Slp g = random_slp_for(rng, w);
    CHECK(eval_bool(g) == static_cast<int>(eval_brute(w, bi)));
  }
}

TEST_CASE("eval_lattice: two-element and chain lattices") {
  RankedAlphabet lat2;
  lat2.add("meet", 2);
  lat2.add("join", 2);
  lat2.add("0", 0);
  lat2.add("1", 0);
  LatticeSpec two;
  two.elements = {{"0", {0}}, {"1", {1}}};
  Slp t = literal_slp(parse_traversal("meet 1 join 0 1", lat2, false));
  CHECK(eval_lattice(t, two) == "1");

  RankedAlphabet lat3 = lat2;
  lat3.add("2", 0);
  LatticeSpec chain;
  chain.elements = {{"0", {0, 0}}, {"1", {0, 1}}, {"2", {1, 1}}};
  Slp u = literal_slp(parse_traversal("join 1 meet 2 1", lat3, false));
  CHECK(eval_lattice(u, chain) == "1");

  LatticeSpec bad;
  bad.elements = {{"0", {0, 0}}, {"1", {0, 0}}};
  CHECK(code_of([&] { eval_lattice(u, bad); }) == Errc::InvalidEmbedding);

  // random chain-lattice trees vs a brute lattice evaluation
  Rng rng(28);
  RankedAlphabet alpha;
  alpha.add("meet", 2);
  alpha.add("join", 2);
  alpha.add("0", 0);
  alpha.add("1", 0);
  alpha.add("2", 0);
  Interpretation minmax;
  minmax.apply = [](const TermSymbol& s, const std::vector<BigInt>& args) -> BigInt {
    if (s.rank() == 0) return BigInt(s.name());
    return s.name() == "meet" ? std::min(args[0], args[1]) : std::max(args[0], args[1]);
  };
  for (int iter = 0; iter < 40; ++iter) {
    auto w = random_tree_word(rng, alpha, 2 * (1 + rng() % 60) + 1);
    Slp g = random_slp_for(rng, w);
    CHECK(eval_lattice(g, chain) == eval_brute(w, minmax).str());
  }
}

TEST_CASE("caterpillar op/operand fixed points") {
  Slp t = term_slp("+(2,*(3,4))");
  CHECK(caterpillar_op(t, 1) == TermSymbol::ranked("+", 2));
  CHECK(caterpillar_op(t, 2) == TermSymbol::ranked("*", 2));
  CHECK(caterpillar_operand(t, 1) == 2);
  CHECK(caterpillar_operand(t, 2) == 3);
  CHECK(caterpillar_operand(t, 3) == 4);
  CHECK(code_of([&] { caterpillar_op(t, 3); }) == Errc::OutOfRange);

  Slp single = term_slp("9");
  CHECK(caterpillar_operand(single, 1) == 9);

  Slp not_cat = term_slp("+(*(1,2),*(3,4))");
  CHECK(code_of([&] { caterpillar_op(not_cat, 1); }) == Errc::NotCaterpillar);
}

TEST_CASE("caterpillar op/operand match explicit recursion on random caterpillars") {
  Rng rng(29);
  std::vector<TermSymbol> ops{TermSymbol::ranked("+", 2), TermSymbol::ranked("*", 2)};
  for (int iter = 0; iter < 80; ++iter) {
    std::size_t m = rng() % 12;
    auto w = random_caterpillar(rng, ops, m, 9);
    Slp g = random_slp_for(rng, w);
    CaterpillarView view(g);
    REQUIRE(view.operator_count() == m);
    // explicit inductive definition
    std::vector<TermSymbol> expect_op;
    std::vector<BigInt> expect_operand;
    std::function<void(std::vector<TermSymbol>)> unroll = [&](std::vector<TermSymbol> tw) {
      if (tw.size() == 1) {
        expect_operand.push_back(tw[0].value());
        return;
      }
      expect_op.push_back(tw[0]);
      // t = f(a, s) or f(s, a)
      if (tw[1].rank() == 0 && tw.size() > 3) {
        expect_operand.push_back(tw[1].value());
        unroll(std::vector<TermSymbol>(tw.begin() + 2, tw.end()));
      } else if (tw.size() == 3) {
        expect_operand.push_back(tw[1].value());
        unroll(std::vector<TermSymbol>(tw.begin() + 2, tw.end()));
      } else {
        expect_operand.push_back(tw.back().value());
        unroll(std::vector<TermSymbol>(tw.begin() + 1, tw.end() - 1));
      }
    };
    unroll(w);
    // the recursion above pushes operands in spine order; op(t,i) and
    // operand(t,j) must match
    for (std::size_t i = 1; i <= m; ++i) CHECK(view.op(i) == expect_op[i - 1]);
    for (std::size_t j = 1; j <= m + 1; ++j) CHECK(view.operand(j) == expect_operand[j - 1]);
  }
}

TEST_CASE("caterpillar access stays cheap on a compressed million-operator spine") {
  // +(1, +(1, ... +(1, 5))): preorder ("+" "1")^m "5" via a doubling grammar
  Slp g;
  std::uint32_t unit = g.add_nonterminal("U0");
  g.set_production(unit, {item_term(TermSymbol::ranked("+", 2)), item_term(TermSymbol::int_const(1))});
  std::uint32_t prev = unit;
  for (int i = 1; i <= 21; ++i) {
    std::uint32_t cur = g.add_nonterminal("U" + std::to_string(i));
    g.set_production(cur, {item_nt(prev), item_nt(prev)});
    prev = cur;
  }
  std::uint32_t s = g.add_nonterminal("S");
  g.set_production(s, {item_nt(prev), item_term(TermSymbol::int_const(5))});
  g.set_start(s);

  BigInt m = BigInt(1) << 21;
  CaterpillarView view(g);
  REQUIRE(view.operator_count() == m);
  CHECK(view.op(1) == TermSymbol::ranked("+", 2));
  CHECK(view.op(m) == TermSymbol::ranked("+", 2));
  CHECK(view.operand(1) == 1);
  CHECK(view.operand(m) == 1);
  CHECK(view.operand(m + 1) == 5);
  PlusTimesMatrix mx(g, 65537);
  CHECK(mx.entry(m / 2, m / 2) == 1);      // diagonal of a + row: its operand
  CHECK(mx.entry(1, m) == 1);              // above diagonal, op(1) = +
  CHECK(mx.entry(m + 1, m / 3) == 1);      // below diagonal, op = +
}

TEST_CASE("plus-times matrix: worked example mod 101") {
  Slp t = term_slp("+(2,*(3,4))");
  PlusTimesMatrix mx(t, 101);
  REQUIRE(mx.operator_count() == 2);
  // rows (2,1,1), (1,0,0), (1,3,4)
  BigInt rows[3][3] = {{2, 1, 1}, {1, 0, 0}, {1, 3, 4}};
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) CHECK(mx.entry(i, j) == rows[i - 1][j - 1]);
  CHECK(mx.row_product_sum() == 14);

  Slp single = term_slp("7");
  PlusTimesMatrix mx1(single, 101);
  CHECK(mx1.entry(1, 1) == 7);
  CHECK(mx1.row_product_sum() == 7);

  CHECK(code_of([&] { PlusTimesMatrix bad(t, 100); }) == Errc::NotPrime);
}

TEST_CASE("plus-times matrix identity on random caterpillars") {
  Rng rng(30);
  std::vector<TermSymbol> ops{TermSymbol::ranked("+", 2), TermSymbol::ranked("*", 2)};
  Interpretation exact = plus_times_interp();
  for (int iter = 0; iter < 120; ++iter) {
    auto w = random_caterpillar(rng, ops, rng() % 12, 20);
    Slp g = random_slp_for(rng, w);
    for (BigInt p : {BigInt(101), BigInt(65537)}) {
      BigInt expect = eval_brute(w, exact) % p;
      if (expect < 0) expect += p;
      CHECK(PlusTimesMatrix(g, p).row_product_sum() == expect);
    }
  }
}

TEST_CASE("max-plus matrix: worked example and oracle identity") {
  Slp t = term_slp("max(5,+(2,3))");
  MaxPlusMatrix mx(t);
  CHECK(mx.max_row_sum() == 5);
  CHECK(mx.entry(1, 1).value() == 5);
  CHECK_FALSE(mx.entry(2, 2).has_value());

  Slp single = term_slp("42");
  CHECK(MaxPlusMatrix(single).max_row_sum() == 42);

  Rng rng(31);
  std::vector<TermSymbol> ops{TermSymbol::ranked("max", 2), TermSymbol::ranked("+", 2)};
  Interpretation mp = max_plus_interp();
  for (int iter = 0; iter < 150; ++iter) {
    auto w = random_caterpillar(rng, ops, rng() % 12, 25);
    Slp g = random_slp_for(rng, w);
    CHECK(MaxPlusMatrix(g).max_row_sum() == eval_brute(w, mp));
  }
}

TEST_CASE("compressed arithmetic evaluators equal eval_brute") {
  Rng rng(32);
  Interpretation mp = max_plus_interp();
  std::vector<TermSymbol> mp_ops{TermSymbol::ranked("max", 2), TermSymbol::ranked("+", 2)};
  for (int iter = 0; iter < 50; ++iter) {
    auto w = random_op_tree(rng, mp_ops, 1 + rng() % 30, 20);
    Slp g = random_slp_for(rng, w);
    CHECK(eval_max_plus(g) == eval_brute(w, mp));
  }

  Interpretation exact = plus_times_interp();
  std::vector<TermSymbol> pt_ops{TermSymbol::ranked("+", 2), TermSymbol::ranked("*", 2)};
  for (int iter = 0; iter < 40; ++iter) {
    auto w = random_op_tree(rng, pt_ops, 1 + rng() % 25, 9);
    Slp g = random_slp_for(rng, w);
    BigInt p = 65537;
    BigInt expect = eval_brute(w, exact) % p;
    if (expect < 0) expect += p;
    CHECK(eval_plus_times_mod(g, p) == expect);
  }

  // exact evaluator refuses what it cannot expand
  Slp big;
  std::uint32_t prev = big.add_nonterminal("M0");
  big.set_production(prev, {item_term(TermSymbol::int_const(2))});
  for (int i = 1; i <= 40; ++i) {
    std::uint32_t cur = big.add_nonterminal("M" + std::to_string(i));
    big.set_production(cur, {item_term(TermSymbol::ranked("*", 2)), item_nt(prev), item_nt(prev)});
    prev = cur;
  }
  big.set_start(prev);
  CHECK(code_of([&] { eval_plus_times_exact(big); }) == Errc::ValueTooLarge);
  CHECK(eval_plus_times_exact(term_slp("+(2,*(3,4))")) == 14);
}

TEST_CASE("declared polynomial bounds hold on sampled trees") {
  Rng rng(33);
  std::vector<TermSymbol> mp_ops{TermSymbol::ranked("max", 2), TermSymbol::ranked("+", 2)};
  std::vector<TermSymbol> chain_ops{TermSymbol::ranked("f", 2)};
  for (const Interpretation& interp : {height_interp(), strahler_interp(), max_plus_interp()}) {
    REQUIRE(interp.is_poly_bounded);
    for (int iter = 0; iter < 30; ++iter) {
      auto w = random_op_tree(rng, interp.name == "maxplus" ? mp_ops : chain_ops,
                              1 + rng() % 40, 50);
      BigInt v = eval_brute(w, interp);
      BigInt magnitude = v < 0 ? -v : v;
      BigInt leaves = 0;
      for (const auto& s : w)
        if (s.is_int_const()) leaves += s.value() < 0 ? -s.value() : s.value();
      BigInt bound = interp.beta * BigInt(w.size()) + leaves;
      BigInt powed = 1;
      for (unsigned k = 0; k < interp.alpha; ++k) powed *= bound;
      CHECK(magnitude <= powed);
    }
  }
}
