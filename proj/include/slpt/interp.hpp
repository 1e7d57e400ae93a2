#pragma once

#include <functional>
#include <string>
#include <vector>

#include "slpt/bigint.hpp"
#include "slpt/symbol.hpp"

namespace slpt {

// Bottom-up interpretation: each rank-n symbol gets an n-ary integer
// function; integer constants evaluate to themselves. The poly-bounded flag
// (with constants alpha, beta) gates the caterpillar reduction.
struct Interpretation {
  std::string name;
  std::function<bool(const BigInt&)> domain_check;  // null = all integers
  std::function<BigInt(const TermSymbol&, const std::vector<BigInt>&)> apply;
  bool is_poly_bounded = false;
  unsigned alpha = 1;
  BigInt beta = 1;

  bool in_domain(const BigInt& v) const { return !domain_check || domain_check(v); }
};

// Bottom-up evaluation of an explicit preorder tree; the oracle for every
// compressed evaluator.
BigInt eval_brute(const std::vector<TermSymbol>& tree, const Interpretation& interp);

// f(args) = 1 + max(args) for internal symbols, rank-0 symbols read as 0,
// integer constants as themselves. Value on a plain tree = its height.
Interpretation height_interp();

// Horton-Strahler: max of the children, plus one when the max repeats.
Interpretation strahler_interp();

// {and, or} over {0,1}; rank-0 symbols named "0"/"1" or integer constants.
Interpretation bool_interp();

// {max, +} over the integers.
Interpretation max_plus_interp();

// {+, *} over the integers (exact; not polynomially bounded).
Interpretation plus_times_interp();

// {+, *} over Z_p.
Interpretation plus_times_mod_interp(const BigInt& p);

bool is_probable_prime(const BigInt& n);

}  // namespace slpt
