#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "slpt/bigint.hpp"
#include "slpt/error.hpp"
#include "slpt/symbol.hpp"

namespace slpt {

struct NtRef {
  std::uint32_t id;
};

// Substring rule item B[lo:hi], 1-based inclusive. lo == hi+1 denotes the
// empty cut, admitted only where a caller asks for possibly-empty cuts.
struct Cut {
  std::uint32_t id;
  BigInt lo;
  BigInt hi;
};

using RhsItem = std::variant<NtRef, TermSymbol, Cut>;

inline RhsItem item_nt(std::uint32_t id) { return NtRef{id}; }
inline RhsItem item_term(TermSymbol s) { return RhsItem(std::move(s)); }

struct ValidationIssue {
  Errc kind;
  std::string nonterminal;
};

struct ValidationReport {
  bool ok = false;
  std::vector<ValidationIssue> issues;
  // Filled on success: children-first order and per-nonterminal value lengths.
  std::vector<std::uint32_t> topo_order;
  std::vector<BigInt> lengths;
  std::string describe() const;
};

// Shared storage for SLPs and composition systems. One production per
// nonterminal; the reference relation must be acyclic (checked by validate).
class GrammarBase {
 public:
  std::uint32_t add_nonterminal(const std::string& name) {
    auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    std::uint32_t id = static_cast<std::uint32_t>(names_.size());
    index_.emplace(name, id);
    names_.push_back(name);
    rhs_.emplace_back();
    defined_.push_back(false);
    return id;
  }

  std::optional<std::uint32_t> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  void set_production(std::uint32_t id, std::vector<RhsItem> items) {
    rhs_.at(id) = std::move(items);
    defined_.at(id) = true;
  }

  void set_start(std::uint32_t id) { start_ = id; }
  std::uint32_t start() const { return start_; }

  std::size_t nt_count() const { return names_.size(); }
  const std::string& nt_name(std::uint32_t id) const { return names_.at(id); }
  const std::vector<RhsItem>& rhs(std::uint32_t id) const { return rhs_.at(id); }
  bool defined(std::uint32_t id) const { return defined_.at(id); }

  // |A| = total length of all right-hand sides.
  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& r : rhs_) n += r.size();
    return n;
  }

  // Fresh nonterminal with a name not colliding with existing ones.
  std::uint32_t fresh_nonterminal(const std::string& base) {
    if (!index_.count(base)) return add_nonterminal(base);
    for (std::uint64_t k = 0;; ++k) {
      std::string cand = base + "_" + std::to_string(k);
      if (!index_.count(cand)) return add_nonterminal(cand);
    }
  }

 protected:
  std::vector<std::string> names_;
  std::map<std::string, std::uint32_t> index_;
  std::vector<std::vector<RhsItem>> rhs_;
  std::vector<bool> defined_;
  std::uint32_t start_ = 0;
};

class Slp : public GrammarBase {};

class CompositionSystem : public GrammarBase {
 public:
  CompositionSystem() = default;
  explicit CompositionSystem(const Slp& slp) {
    names_ = std::vector<std::string>();
    for (std::uint32_t i = 0; i < slp.nt_count(); ++i) add_nonterminal(slp.nt_name(i));
    for (std::uint32_t i = 0; i < slp.nt_count(); ++i)
      if (slp.defined(i)) set_production(i, slp.rhs(i));
    set_start(slp.start());
  }
};

// Acyclicity, production uniqueness and dangling-reference check; computes
// per-nonterminal value lengths on success. Cut bounds are range-checked
// against the referenced nonterminal's length.
ValidationReport validate(const GrammarBase& g);

// Throwing variant used by operations whose precondition is a valid grammar.
ValidationReport require_valid(const GrammarBase& g);

// Grammar whose start expands to exactly the given word.
Slp literal_slp(const std::vector<TermSymbol>& w, const std::string& start_name = "S");

// Max derivation depth over nonterminals reachable from the start. A
// production with terminal-only right-hand side has depth 1.
std::size_t grammar_depth(const GrammarBase& g);

}  // namespace slpt
