#pragma once

#include <string>
#include <variant>
#include <vector>

#include "slpt/symbol.hpp"

namespace slpt {

// Reference to a parameter x_i (1-based), rank 0.
struct ParamRef {
  int index;
};

// Reference to a ranked nonterminal of a TSLP, by id.
struct TslpNtRef {
  std::uint32_t id;
};

// Explicit tree over terminals, TSLP nonterminals and parameters. Patterns
// use the terminal/parameter subset.
struct TermTree {
  std::variant<TermSymbol, TslpNtRef, ParamRef> label;
  std::vector<TermTree> children;

  static TermTree leaf(TermSymbol s) { return {std::move(s), {}}; }
  static TermTree node(TermSymbol s, std::vector<TermTree> ch) {
    return {std::move(s), std::move(ch)};
  }
  static TermTree param(int i) { return {ParamRef{i}, {}}; }

  bool is_term() const { return std::holds_alternative<TermSymbol>(label); }
  bool is_param() const { return std::holds_alternative<ParamRef>(label); }
  bool is_nt() const { return std::holds_alternative<TslpNtRef>(label); }
};

// Preorder symbol sequence of a terminal-only tree.
std::vector<TermSymbol> preorder_of(const TermTree& t);

// Parse a preorder sequence into an explicit tree; requires the sequence to
// be exactly one tree.
TermTree tree_of_preorder(const std::vector<TermSymbol>& w);

// Term syntax: f(g(a),a), parameters written x1, x2, ..., integer constants
// written #42 or as bare integers.
std::string term_str(const TermTree& t,
                     const std::vector<std::string>* nt_names = nullptr);

}  // namespace slpt
