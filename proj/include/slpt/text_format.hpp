#pragma once

#include <string>
#include <vector>

#include "slpt/slp.hpp"
#include "slpt/term_tree.hpp"
#include "slpt/tslp.hpp"

namespace slpt {

// Line-oriented grammar format:
//   # comment
//   alphabet f:2 a:0
//   intconsts on
//   A -> f A B
//   start A
// Integer constant terminals are written #42. Undeclared symbols are
// rejected. The TSLP variant writes parameterized heads: A(x1,x2) -> f x1 B x2
// with right-hand sides in preorder.
Slp parse_slp_text(const std::string& text);
std::string slp_text(const Slp& slp);

Tslp parse_tslp_text(const std::string& text);
std::string tslp_text(const Tslp& t);

// Term syntax f(g(a),a); ranks inferred from child counts. Parameters are
// written x1, x2, ...; bare integers and #k become integer constants.
TermTree parse_term(const std::string& text);

// Whitespace-separated traversal tokens against a declared alphabet.
std::vector<TermSymbol> parse_traversal(const std::string& text, const RankedAlphabet& alpha,
                                        bool allow_int_consts);

std::string traversal_str(const std::vector<TermSymbol>& w);

}  // namespace slpt
