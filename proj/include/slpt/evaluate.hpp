#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "slpt/bp.hpp"
#include "slpt/interp.hpp"
#include "slpt/slp.hpp"

namespace slpt {

using CaterpillarOracle = std::function<BigInt(const Slp& caterpillar)>;

// t_1^I ... t_n^I (as a string of integer constants) and s^I (the caterpillar
// fragment image) for one nonterminal of the reduction.
struct EvalPair {
  Slp values;
  Slp fragment;
};

struct ReduceTrace {
  BigInt value;
  std::size_t oracle_calls = 0;
  Slp cnf;                      // the normalized input the pairs refer to
  std::vector<EvalPair> pairs;  // indexed by cnf nonterminal id
};

// Evaluation of an SLP-compressed tree, Turing-reduced to caterpillar-tree
// evaluations: per CNF nonterminal, the pair (values, fragment image) is
// maintained in a cut-free composition system, and every completed tree is
// handed to the oracle.
BigInt reduce_to_caterpillar(const Slp& slp, const Interpretation& interp,
                             const CaterpillarOracle& oracle,
                             std::size_t* oracle_calls = nullptr);

ReduceTrace reduce_to_caterpillar_traced(const Slp& slp, const Interpretation& interp,
                                         const CaterpillarOracle& oracle);

// A caterpillar oracle that expands and evaluates directly; the generic
// cross-check path and the test baseline.
CaterpillarOracle brute_oracle(const Interpretation& interp, std::uint64_t limit = 1u << 22);

// Caterpillar evaluator behind height/strahler: deepest-parent chains over
// the distinct leaf constants (two deepest occurrences per constant in
// Strahler mode, where only a repeated maximum bumps the value).
BigInt eval_caterpillar_max_chain(const Slp& caterpillar, bool strahler_mode);

// Caterpillar evaluator behind the Boolean evaluator: absorbing-pair cut,
// identity deletion, then a binary-searched suffix/prefix comparison.
BigInt eval_caterpillar_bool(const Slp& caterpillar);

BigInt height(const Slp& slp);
BigInt node_depth(const Slp& slp, const BigInt& i);
BigInt strahler(const Slp& slp);
int eval_bool(const Slp& slp);

struct LatticeSpec {
  // element name -> 0/1 vector; all vectors the same width, pairwise distinct
  std::vector<std::pair<std::string, std::vector<int>>> elements;
};

// Componentwise Boolean evaluation through the lattice's power embedding;
// trees use meet/join plus element names as rank-0 symbols.
std::string eval_lattice(const Slp& slp, const LatticeSpec& lattice);

// Exact {+,*} evaluation; refuses trees too large to expand (the values may
// need exponentially many bits, so there is no compressed path).
BigInt eval_plus_times_exact(const Slp& slp, std::uint64_t node_limit = 1u << 16);

// {+,*} mod p and {max,+} via the reduction with matrix-backed oracles; the
// oracle refuses caterpillars with more operators than desk_limit.
BigInt eval_plus_times_mod(const Slp& slp, const BigInt& p, std::uint64_t desk_limit = 1u << 14);
BigInt eval_max_plus(const Slp& slp, std::uint64_t desk_limit = 1u << 14);

// Binary caterpillar access: the i-th operator and the constant argument of
// the j-th operator (the last operator owns operands m and m+1).
class CaterpillarView {
 public:
  explicit CaterpillarView(const Slp& slp);
  const BigInt& operator_count() const { return m_; }
  TermSymbol op(const BigInt& i) const;
  BigInt operand(const BigInt& j) const;

 private:
  Slp slp_;
  DfudsIndex idx_;
  GammaCounts ops_;
  BigInt m_;
};

TermSymbol caterpillar_op(const Slp& slp, const BigInt& i);
BigInt caterpillar_operand(const Slp& slp, const BigInt& j);

// x_{i,j} entries over Z_p with sum-of-row-products identity for {+,*}.
class PlusTimesMatrix {
 public:
  PlusTimesMatrix(const Slp& caterpillar, const BigInt& p);
  const BigInt& operator_count() const { return view_.operator_count(); }
  BigInt entry(const BigInt& i, const BigInt& j) const;
  // sum_i prod_j x_{i,j} mod p; full check needs m+1 <= desk limit
  BigInt row_product_sum(std::uint64_t desk_limit = 1u << 14) const;

 private:
  CaterpillarView view_;
  BigInt p_;
};

// Max-plus analogue: max over row sums, excluded rows are nullopt.
class MaxPlusMatrix {
 public:
  explicit MaxPlusMatrix(const Slp& caterpillar);
  const BigInt& operator_count() const { return view_.operator_count(); }
  std::optional<BigInt> entry(const BigInt& i, const BigInt& j) const;
  BigInt max_row_sum(std::uint64_t desk_limit = 1u << 14) const;

 private:
  CaterpillarView view_;
};

}  // namespace slpt
