#pragma once

#include <optional>
#include <vector>

#include "slpt/slp.hpp"
#include "slpt/term_tree.hpp"

namespace slpt {

// Tree straight-line program: ranked nonterminals, one production each, tree
// right-hand sides in which every parameter occurs at most once. Size counts
// non-parameter nodes only.
class Tslp {
 public:
  std::uint32_t add_nonterminal(const std::string& name, int rank) {
    auto it = index_.find(name);
    if (it != index_.end()) {
      if (ranks_[it->second] != rank)
        raise(Errc::RankMismatch, name + " redeclared with a different rank");
      return it->second;
    }
    std::uint32_t id = static_cast<std::uint32_t>(names_.size());
    index_.emplace(name, id);
    names_.push_back(name);
    ranks_.push_back(rank);
    rhs_.push_back(TermTree::param(1));
    defined_.push_back(false);
    return id;
  }

  std::optional<std::uint32_t> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  void set_production(std::uint32_t id, TermTree rhs) {
    rhs_.at(id) = std::move(rhs);
    defined_.at(id) = true;
  }
  void set_start(std::uint32_t id) { start_ = id; }

  std::uint32_t start() const { return start_; }
  std::size_t nt_count() const { return names_.size(); }
  const std::string& nt_name(std::uint32_t id) const { return names_.at(id); }
  int rank_of(std::uint32_t id) const { return ranks_.at(id); }
  const TermTree& rhs(std::uint32_t id) const { return rhs_.at(id); }
  bool defined(std::uint32_t id) const { return defined_.at(id); }

  // Non-parameter nodes over all right-hand sides.
  std::size_t size() const;

 private:
  std::vector<std::string> names_;
  std::vector<int> ranks_;
  std::vector<TermTree> rhs_;
  std::vector<bool> defined_;
  std::map<std::string, std::uint32_t> index_;
  std::uint32_t start_ = 0;
};

struct TslpValidationReport {
  bool ok = false;
  std::vector<ValidationIssue> issues;
  std::vector<std::uint32_t> topo_order;
  std::string describe() const;
};

TslpValidationReport validate_tslp(const Tslp& t);
TslpValidationReport require_valid_tslp(const Tslp& t);

// Explicit tree val(t); throws ExpansionTooLarge past the node limit.
TermTree tslp_expand(const Tslp& t, std::uint64_t limit);

// SLP for the preorder traversal of val(t); size O(|t| * r).
Slp tslp_to_slp(const Tslp& t);

// Inverse direction via the three-case shape construction; output size
// O(m*h*r). The intermediate nonterminal count is capped: combs compressed
// far below their height have no small TSLP, and the cap turns that inherent
// blowup into TooLarge instead of an allocation failure.
Tslp slp_to_tslp(const Slp& slp, std::uint64_t work_limit = 50'000'000);

// Max full-tree count over the values of reachable nonterminals; the h*r
// bound diagnostic.
BigInt max_full_trees_in_factor(const Slp& slp);

}  // namespace slpt
