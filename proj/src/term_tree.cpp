#include "slpt/term_tree.hpp"

#include "slpt/error.hpp"

namespace slpt {

std::vector<TermSymbol> preorder_of(const TermTree& t) {
  std::vector<TermSymbol> out;
  std::vector<const TermTree*> stack{&t};
  while (!stack.empty()) {
    const TermTree* node = stack.back();
    stack.pop_back();
    if (!node->is_term()) raise(Errc::ParseError, "non-terminal label in explicit tree");
    out.push_back(std::get<TermSymbol>(node->label));
    for (std::size_t i = node->children.size(); i-- > 0;) stack.push_back(&node->children[i]);
  }
  return out;
}

namespace {
TermTree parse_preorder(const std::vector<TermSymbol>& w, std::size_t& pos) {
  if (pos >= w.size()) raise(Errc::NotATree, "truncated preorder sequence");
  TermSymbol sym = w[pos++];
  TermTree node = TermTree::leaf(sym);
  node.children.reserve(sym.rank());
  for (int i = 0; i < sym.rank(); ++i) node.children.push_back(parse_preorder(w, pos));
  return node;
}
}  // namespace

TermTree tree_of_preorder(const std::vector<TermSymbol>& w) {
  std::size_t pos = 0;
  TermTree t = parse_preorder(w, pos);
  if (pos != w.size()) raise(Errc::NotATree, "trailing symbols after tree");
  return t;
}

std::string term_str(const TermTree& t, const std::vector<std::string>* nt_names) {
  std::string out;
  if (t.is_param()) {
    out = "x" + std::to_string(std::get<ParamRef>(t.label).index);
  } else if (t.is_nt()) {
    std::uint32_t id = std::get<TslpNtRef>(t.label).id;
    out = nt_names != nullptr ? (*nt_names)[id] : ("N" + std::to_string(id));
  } else {
    out = std::get<TermSymbol>(t.label).str();
  }
  if (t.children.empty()) return out;
  out += "(";
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    if (i > 0) out += ",";
    out += term_str(t.children[i], nt_names);
  }
  out += ")";
  return out;
}

}  // namespace slpt
