#pragma once

#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "slpt/bigint.hpp"
#include "slpt/error.hpp"

namespace slpt {

// A terminal of a ranked alphabet: either a named symbol with a fixed rank or
// an integer constant (rank 0, drawn from the infinite leaf alphabet used by
// the evaluators).
class TermSymbol {
 public:
  TermSymbol() : data_(Named{"?", 0}) {}

  static TermSymbol ranked(std::string name, int rank) {
    TermSymbol s;
    s.data_ = Named{std::move(name), rank};
    return s;
  }
  static TermSymbol int_const(BigInt v) {
    TermSymbol s;
    s.data_ = std::move(v);
    return s;
  }

  bool is_int_const() const { return std::holds_alternative<BigInt>(data_); }
  int rank() const {
    if (is_int_const()) return 0;
    return std::get<Named>(data_).rank;
  }
  const std::string& name() const { return std::get<Named>(data_).name; }
  const BigInt& value() const { return std::get<BigInt>(data_); }

  // Printable token; integer constants render as #v, matching the text format.
  std::string str() const {
    if (is_int_const()) return "#" + value().str();
    return name();
  }

  friend bool operator==(const TermSymbol& a, const TermSymbol& b) {
    if (a.is_int_const() != b.is_int_const()) return false;
    if (a.is_int_const()) return a.value() == b.value();
    return a.name() == b.name() && a.rank() == b.rank();
  }
  friend bool operator!=(const TermSymbol& a, const TermSymbol& b) { return !(a == b); }
  friend bool operator<(const TermSymbol& a, const TermSymbol& b) {
    if (a.is_int_const() != b.is_int_const()) return a.is_int_const();
    if (a.is_int_const()) return a.value() < b.value();
    if (a.name() != b.name()) return a.name() < b.name();
    return a.rank() < b.rank();
  }

 private:
  struct Named {
    std::string name;
    int rank;
  };
  std::variant<Named, BigInt> data_;
};

using SymbolPred = std::function<bool(const TermSymbol&)>;

inline SymbolPred pred_of(std::vector<TermSymbol> set) {
  return [set = std::move(set)](const TermSymbol& s) {
    for (const auto& t : set)
      if (t == s) return true;
    return false;
  };
}

inline SymbolPred pred_rank_positive() {
  return [](const TermSymbol& s) { return s.rank() > 0; };
}

// A finite set of named ranked symbols; integer constants are admitted on top
// when allow_int_consts is set.
class RankedAlphabet {
 public:
  RankedAlphabet() = default;

  void add(const std::string& name, int rank) {
    if (rank < 0) raise(Errc::ParseError, "negative rank for symbol " + name);
    auto it = ranks_.find(name);
    if (it != ranks_.end()) {
      if (it->second != rank)
        raise(Errc::ParseError, "symbol " + name + " declared with two ranks");
      return;
    }
    ranks_.emplace(name, rank);
    order_.push_back(name);
  }

  bool contains(const std::string& name) const { return ranks_.count(name) != 0; }
  int rank_of(const std::string& name) const {
    auto it = ranks_.find(name);
    if (it == ranks_.end()) raise(Errc::ParseError, "undeclared symbol " + name);
    return it->second;
  }

  bool allow_int_consts = false;

  bool has_rank0() const {
    if (allow_int_consts) return true;
    for (const auto& [n, r] : ranks_)
      if (r == 0) return true;
    return false;
  }

  std::vector<TermSymbol> symbols() const {
    std::vector<TermSymbol> out;
    out.reserve(order_.size());
    for (const auto& n : order_) out.push_back(TermSymbol::ranked(n, ranks_.at(n)));
    return out;
  }

 private:
  std::map<std::string, int> ranks_;
  std::vector<std::string> order_;
};

}  // namespace slpt
