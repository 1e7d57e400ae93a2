#include "slpt/interp.hpp"

#include <algorithm>

#include "slpt/error.hpp"

namespace slpt {

BigInt eval_brute(const std::vector<TermSymbol>& tree, const Interpretation& interp) {
  // Right-to-left scan with a value stack: each rank-n symbol pops n values.
  std::vector<BigInt> stack;
  for (std::size_t pos = tree.size(); pos-- > 0;) {
    const TermSymbol& sym = tree[pos];
    int n = sym.rank();
    if (static_cast<std::size_t>(n) > stack.size())
      raise(Errc::NotATree, "truncated argument list at position " + std::to_string(pos + 1));
    std::vector<BigInt> args;
    args.reserve(n);
    for (int i = 0; i < n; ++i) {
      args.push_back(std::move(stack.back()));
      stack.pop_back();
    }
    BigInt v = interp.apply(sym, args);
    if (!interp.in_domain(v))
      raise(Errc::DomainViolation, "node " + std::to_string(pos + 1) + " evaluates to " + v.str());
    stack.push_back(std::move(v));
  }
  if (stack.size() != 1) raise(Errc::NotATree, "evaluation left " + std::to_string(stack.size()) + " values");
  return stack.back();
}

namespace {

BigInt leaf_value_strict(const TermSymbol& sym) {
  if (sym.is_int_const()) return sym.value();
  if (auto v = parse_bigint(sym.name())) return *v;
  raise(Errc::WrongAlphabet, "expected an integer leaf, found " + sym.str());
}

BigInt max_of(const std::vector<BigInt>& args) {
  BigInt m = args.at(0);
  for (const auto& a : args)
    if (a > m) m = a;
  return m;
}

}  // namespace

Interpretation height_interp() {
  Interpretation i;
  i.name = "height";
  i.apply = [](const TermSymbol& sym, const std::vector<BigInt>& args) -> BigInt {
    if (sym.rank() == 0) return sym.is_int_const() ? sym.value() : BigInt(0);
    return 1 + max_of(args);
  };
  i.is_poly_bounded = true;
  i.alpha = 1;
  i.beta = 1;
  return i;
}

Interpretation strahler_interp() {
  Interpretation i;
  i.name = "strahler";
  i.apply = [](const TermSymbol& sym, const std::vector<BigInt>& args) -> BigInt {
    if (sym.rank() == 0) return sym.is_int_const() ? sym.value() : BigInt(0);
    BigInt m = max_of(args);
    int hits = 0;
    for (const auto& a : args)
      if (a == m) ++hits;
    return hits >= 2 ? m + 1 : m;
  };
  i.is_poly_bounded = true;
  i.alpha = 1;
  i.beta = 1;
  return i;
}

Interpretation bool_interp() {
  Interpretation i;
  i.name = "bool";
  i.domain_check = [](const BigInt& v) { return v == 0 || v == 1; };
  i.apply = [](const TermSymbol& sym, const std::vector<BigInt>& args) -> BigInt {
    if (sym.rank() == 0) {
      BigInt v = leaf_value_strict(sym);
      if (v != 0 && v != 1) raise(Errc::WrongAlphabet, "boolean leaf " + sym.str());
      return v;
    }
    if (sym.rank() != 2 || sym.is_int_const())
      raise(Errc::WrongAlphabet, sym.str());
    if (sym.name() == "and") return args[0] != 0 && args[1] != 0 ? 1 : 0;
    if (sym.name() == "or") return args[0] != 0 || args[1] != 0 ? 1 : 0;
    raise(Errc::WrongAlphabet, sym.str());
  };
  i.is_poly_bounded = true;
  i.alpha = 1;
  i.beta = 1;
  return i;
}

Interpretation max_plus_interp() {
  Interpretation i;
  i.name = "maxplus";
  i.apply = [](const TermSymbol& sym, const std::vector<BigInt>& args) -> BigInt {
    if (sym.rank() == 0) return leaf_value_strict(sym);
    if (sym.rank() != 2) raise(Errc::WrongAlphabet, sym.str());
    if (sym.name() == "max") return max_of(args);
    if (sym.name() == "+") return args[0] + args[1];
    raise(Errc::WrongAlphabet, sym.str());
  };
  i.is_poly_bounded = true;
  i.alpha = 1;
  i.beta = 1;
  return i;
}

Interpretation plus_times_interp() {
  Interpretation i;
  i.name = "plustimes";
  i.apply = [](const TermSymbol& sym, const std::vector<BigInt>& args) -> BigInt {
    if (sym.rank() == 0) return leaf_value_strict(sym);
    if (sym.rank() != 2) raise(Errc::WrongAlphabet, sym.str());
    if (sym.name() == "+") return args[0] + args[1];
    if (sym.name() == "*") return args[0] * args[1];
    raise(Errc::WrongAlphabet, sym.str());
  };
  i.is_poly_bounded = false;
  return i;
}

Interpretation plus_times_mod_interp(const BigInt& p) {
  if (!is_probable_prime(p)) raise(Errc::NotPrime, p.str());
  Interpretation i;
  i.name = "plustimes mod " + p.str();
  i.domain_check = [p](const BigInt& v) { return v >= 0 && v < p; };
  i.apply = [p](const TermSymbol& sym, const std::vector<BigInt>& args) -> BigInt {
    if (sym.rank() == 0) {
      BigInt v = leaf_value_strict(sym) % p;
      if (v < 0) v += p;
      return v;
    }
    if (sym.rank() != 2) raise(Errc::WrongAlphabet, sym.str());
    if (sym.name() == "+") return (args[0] + args[1]) % p;
    if (sym.name() == "*") return (args[0] * args[1]) % p;
    raise(Errc::WrongAlphabet, sym.str());
  };
  i.is_poly_bounded = true;  // values live in [0, p)
  i.alpha = 1;
  i.beta = 1;
  return i;
}

bool is_probable_prime(const BigInt& n) {
  if (n < 2) return false;
  for (int q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  // Miller-Rabin with fixed bases; deterministic for 64-bit inputs.
  BigInt d = n - 1;
  unsigned r = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++r;
  }
  for (int abase : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    BigInt x = boost::multiprecision::powm(BigInt(abase), d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (unsigned i = 1; i < r; ++i) {
      x = (x * x) % n;
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

}  // namespace slpt
