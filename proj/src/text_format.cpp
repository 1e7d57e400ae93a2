#include "slpt/text_format.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace slpt {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::vector<std::vector<std::string>> tokenized_lines(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    // whole-line comments only: a production item may legitimately be #42
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    out.push_back(split_ws(line));
  }
  return out;
}

bool is_int_token(const std::string& tok) {
  return tok.size() >= 2 && tok[0] == '#' &&
         parse_bigint(tok.substr(1)).has_value();
}

bool is_param_token(const std::string& tok, int* index) {
  if (tok.size() < 2 || tok[0] != 'x') return false;
  for (std::size_t i = 1; i < tok.size(); ++i)
    if (!isdigit(static_cast<unsigned char>(tok[i]))) return false;
  if (index != nullptr) *index = std::stoi(tok.substr(1));
  return true;
}

struct Header {
  RankedAlphabet alpha;
  std::string start;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> productions;  // line idx, toks
};

Header parse_header(const std::vector<std::vector<std::string>>& lines) {
  Header h;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const auto& toks = lines[li];
    if (toks.empty()) continue;
    if (toks[0] == "alphabet") {
      for (std::size_t i = 1; i < toks.size(); ++i) {
        std::size_t colon = toks[i].rfind(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 == toks[i].size())
          raise(Errc::ParseError, "bad alphabet entry " + toks[i]);
        std::string name = toks[i].substr(0, colon);
        int rank = 0;
        try {
          rank = std::stoi(toks[i].substr(colon + 1));
        } catch (...) {
          raise(Errc::ParseError, "bad rank in " + toks[i]);
        }
        h.alpha.add(name, rank);
      }
    } else if (toks[0] == "intconsts") {
      if (toks.size() != 2 || (toks[1] != "on" && toks[1] != "off"))
        raise(Errc::ParseError, "intconsts expects on/off");
      h.alpha.allow_int_consts = toks[1] == "on";
    } else if (toks[0] == "start") {
      if (toks.size() != 2) raise(Errc::ParseError, "start expects one name");
      h.start = toks[1];
    } else {
      h.productions.push_back({li, toks});
    }
  }
  if (h.start.empty()) raise(Errc::ParseError, "missing start line");
  return h;
}

}  // namespace

Slp parse_slp_text(const std::string& text) {
  Header h = parse_header(tokenized_lines(text));
  Slp slp;
  // First pass: collect left-hand sides.
  std::set<std::string> lhs;
  for (const auto& [li, toks] : h.productions) {
    if (toks.size() < 2 || toks[1] != "->")
      raise(Errc::ParseError, "expected 'NAME -> items' line");
    if (h.alpha.contains(toks[0]))
      raise(Errc::ParseError, "nonterminal " + toks[0] + " collides with a terminal");
    if (!lhs.insert(toks[0]).second)
      raise(Errc::ParseError, "duplicate production for " + toks[0]);
    slp.add_nonterminal(toks[0]);
  }
  for (const auto& [li, toks] : h.productions) {
    std::vector<RhsItem> items;
    for (std::size_t i = 2; i < toks.size(); ++i) {
      const std::string& tok = toks[i];
      if (h.alpha.contains(tok)) {
        items.push_back(item_term(TermSymbol::ranked(tok, h.alpha.rank_of(tok))));
      } else if (is_int_token(tok)) {
        if (!h.alpha.allow_int_consts)
          raise(Errc::ParseError, "integer constant " + tok + " without 'intconsts on'");
        items.push_back(item_term(TermSymbol::int_const(*parse_bigint(tok.substr(1)))));
      } else if (lhs.count(tok)) {
        items.push_back(item_nt(*slp.find(tok)));
      } else {
        raise(Errc::ParseError, "undeclared symbol " + tok);
      }
    }
    slp.set_production(*slp.find(toks[0]), std::move(items));
  }
  auto s = slp.find(h.start);
  if (!s) raise(Errc::ParseError, "start " + h.start + " has no production");
  slp.set_start(*s);
  return slp;
}

namespace {

// Nonterminal names are sanitized on output so the result reparses: tokens
// with whitespace or collisions with terminals get renamed.
std::vector<std::string> output_names(const std::vector<std::string>& names,
                                      const std::set<std::string>& taken) {
  std::vector<std::string> out;
  std::set<std::string> used = taken;
  for (const auto& n : names) {
    std::string cand = n;
    if (cand.empty()) cand = "N";
    for (char& c : cand)
      if (isspace(static_cast<unsigned char>(c))) c = '_';
    if (cand == "->" || cand[0] == '#' || cand == "alphabet" || cand == "start" ||
        cand == "intconsts" || used.count(cand)) {
      std::string base = cand == "->" || cand[0] == '#' ? "N" : cand;
      std::uint64_t k = 1;
      while (used.count(base + "~" + std::to_string(k))) ++k;
      cand = base + "~" + std::to_string(k);
    }
    used.insert(cand);
    out.push_back(cand);
  }
  return out;
}

}  // namespace

std::string slp_text(const Slp& slp) {
  // Alphabet from terminals appearing in any production.
  RankedAlphabet alpha;
  bool ints = false;
  for (std::uint32_t id = 0; id < slp.nt_count(); ++id)
    for (const auto& item : slp.rhs(id))
      if (const TermSymbol* t = std::get_if<TermSymbol>(&item)) {
        if (t->is_int_const())
          ints = true;
        else
          alpha.add(t->name(), t->rank());
      }
  std::set<std::string> taken;
  for (const auto& s : alpha.symbols()) taken.insert(s.name());
  std::vector<std::string> names;
  for (std::uint32_t id = 0; id < slp.nt_count(); ++id) names.push_back(slp.nt_name(id));
  names = output_names(names, taken);

  std::ostringstream out;
  out << "alphabet";
  for (const auto& s : alpha.symbols()) out << " " << s.name() << ":" << s.rank();
  out << "\n";
  if (ints) out << "intconsts on\n";
  for (std::uint32_t id = 0; id < slp.nt_count(); ++id) {
    if (!slp.defined(id)) continue;
    out << names[id] << " ->";
    for (const auto& item : slp.rhs(id)) {
      if (const TermSymbol* t = std::get_if<TermSymbol>(&item))
        out << " " << t->str();
      else
        out << " " << names[std::get<NtRef>(item).id];
    }
    out << "\n";
  }
  out << "start " << names[slp.start()] << "\n";
  return out.str();
}

Tslp parse_tslp_text(const std::string& text) {
  Header h = parse_header(tokenized_lines(text));
  Tslp t;
  // Heads: NAME or NAME(x1,..,xn).
  struct Head {
    std::string name;
    int rank;
  };
  std::map<std::string, int> heads;
  std::vector<Head> head_of_line;
  for (const auto& [li, toks] : h.productions) {
    if (toks.size() < 2 || toks[1] != "->")
      raise(Errc::ParseError, "expected 'HEAD -> items' line");
    std::string head = toks[0];
    int rank = 0;
    std::size_t paren = head.find('(');
    std::string name = head;
    if (paren != std::string::npos) {
      if (head.back() != ')') raise(Errc::ParseError, "bad head " + head);
      name = head.substr(0, paren);
      std::string params = head.substr(paren + 1, head.size() - paren - 2);
      if (!params.empty()) {
        std::istringstream ps(params);
        std::string p;
        while (std::getline(ps, p, ',')) {
          int idx = 0;
          if (!is_param_token(p, &idx) || idx != rank + 1)
            raise(Errc::ParseError, "head parameters must be x1,x2,... in order: " + head);
          ++rank;
        }
      }
    }
    if (h.alpha.contains(name))
      raise(Errc::ParseError, "nonterminal " + name + " collides with a terminal");
    if (heads.count(name)) raise(Errc::ParseError, "duplicate production for " + name);
    heads[name] = rank;
    head_of_line.push_back({name, rank});
    t.add_nonterminal(name, rank);
  }
  std::size_t pi = 0;
  for (const auto& [li, toks] : h.productions) {
    const Head& head = head_of_line[pi++];
    // Preorder parse of the right-hand side.
    std::size_t pos = 2;
    std::function<TermTree()> parse = [&]() -> TermTree {
      if (pos >= toks.size()) raise(Errc::ParseError, "truncated right-hand side for " + head.name);
      std::string tok = toks[pos++];
      int pidx = 0;
      if (h.alpha.contains(tok)) {
        TermSymbol sym = TermSymbol::ranked(tok, h.alpha.rank_of(tok));
        TermTree node = TermTree::leaf(sym);
        for (int i = 0; i < sym.rank(); ++i) node.children.push_back(parse());
        return node;
      }
      if (is_int_token(tok)) {
        if (!h.alpha.allow_int_consts)
          raise(Errc::ParseError, "integer constant " + tok + " without 'intconsts on'");
        return TermTree::leaf(TermSymbol::int_const(*parse_bigint(tok.substr(1))));
      }
      if (is_param_token(tok, &pidx)) return TermTree::param(pidx);
      auto it = heads.find(tok);
      if (it == heads.end()) raise(Errc::ParseError, "undeclared symbol " + tok);
      TermTree node{TslpNtRef{*t.find(tok)}, {}};
      for (int i = 0; i < it->second; ++i) node.children.push_back(parse());
      return node;
    };
    TermTree rhs = parse();
    if (pos != toks.size())
      raise(Errc::ParseError, "trailing tokens in production for " + head.name);
    t.set_production(*t.find(head.name), std::move(rhs));
  }
  auto s = t.find(h.start);
  if (!s) raise(Errc::ParseError, "start " + h.start + " has no production");
  t.set_start(*s);
  return t;
}

std::string tslp_text(const Tslp& t) {
  RankedAlphabet alpha;
  bool ints = false;
  std::function<void(const TermTree&)> collect = [&](const TermTree& node) {
    if (node.is_term()) {
      const TermSymbol& s = std::get<TermSymbol>(node.label);
      if (s.is_int_const())
        ints = true;
      else
        alpha.add(s.name(), s.rank());
    }
    for (const auto& c : node.children) collect(c);
  };
  for (std::uint32_t id = 0; id < t.nt_count(); ++id)
    if (t.defined(id)) collect(t.rhs(id));

  std::set<std::string> taken;
  for (const auto& s : alpha.symbols()) taken.insert(s.name());
  std::vector<std::string> names;
  for (std::uint32_t id = 0; id < t.nt_count(); ++id) names.push_back(t.nt_name(id));
  names = output_names(names, taken);

  std::ostringstream out;
  out << "alphabet";
  for (const auto& s : alpha.symbols()) out << " " << s.name() << ":" << s.rank();
  out << "\n";
  if (ints) out << "intconsts on\n";
  for (std::uint32_t id = 0; id < t.nt_count(); ++id) {
    if (!t.defined(id)) continue;
    out << names[id];
    if (t.rank_of(id) > 0) {
      out << "(";
      for (int i = 1; i <= t.rank_of(id); ++i) out << (i > 1 ? ",x" : "x") << i;
      out << ")";
    }
    out << " ->";
    std::function<void(const TermTree&)> emit = [&](const TermTree& node) {
      if (node.is_param())
        out << " x" << std::get<ParamRef>(node.label).index;
      else if (node.is_nt())
        out << " " << names[std::get<TslpNtRef>(node.label).id];
      else
        out << " " << std::get<TermSymbol>(node.label).str();
      for (const auto& c : node.children) emit(c);
    };
    emit(t.rhs(id));
    out << "\n";
  }
  out << "start " << names[t.start()] << "\n";
  return out.str();
}

TermTree parse_term(const std::string& text) {
  // tokens: names, integers, '(', ')', ','
  std::vector<std::string> toks;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      toks.push_back(cur);
      cur.clear();
    }
  };
  for (char c : text) {
    if (c == '(' || c == ')' || c == ',') {
      flush();
      toks.push_back(std::string(1, c));
    } else if (isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      cur += c;
    }
  }
  flush();
  if (toks.empty()) raise(Errc::ParseError, "empty term");

  std::size_t pos = 0;
  std::map<std::string, int> ranks;
  std::function<TermTree()> parse = [&]() -> TermTree {
    if (pos >= toks.size()) raise(Errc::ParseError, "truncated term");
    std::string tok = toks[pos++];
    if (tok == "(" || tok == ")" || tok == ",") raise(Errc::ParseError, "unexpected " + tok);
    std::vector<TermTree> children;
    if (pos < toks.size() && toks[pos] == "(") {
      ++pos;
      if (pos < toks.size() && toks[pos] == ")") {
        ++pos;  // f() means rank 0
      } else {
        for (;;) {
          children.push_back(parse());
          if (pos >= toks.size()) raise(Errc::ParseError, "missing )");
          if (toks[pos] == ",") {
            ++pos;
            continue;
          }
          if (toks[pos] == ")") {
            ++pos;
            break;
          }
          raise(Errc::ParseError, "expected , or ) after argument");
        }
      }
    }
    int pidx = 0;
    if (children.empty() && is_param_token(tok, &pidx)) return TermTree::param(pidx);
    if (auto v = parse_bigint(tok); v && children.empty())
      return TermTree::leaf(TermSymbol::int_const(*v));
    if (tok[0] == '#') {
      auto v2 = parse_bigint(tok.substr(1));
      if (v2 && children.empty()) return TermTree::leaf(TermSymbol::int_const(*v2));
    }
    int rank = static_cast<int>(children.size());
    auto it = ranks.find(tok);
    if (it == ranks.end())
      ranks[tok] = rank;
    else if (it->second != rank)
      raise(Errc::ParseError, "symbol " + tok + " used with two ranks");
    TermTree node = TermTree::leaf(TermSymbol::ranked(tok, rank));
    node.children = std::move(children);
    return node;
  };
  TermTree t = parse();
  if (pos != toks.size()) raise(Errc::ParseError, "trailing tokens after term");
  return t;
}

std::vector<TermSymbol> parse_traversal(const std::string& text, const RankedAlphabet& alpha,
                                        bool allow_int_consts) {
  std::vector<TermSymbol> out;
  for (const auto& tok : split_ws(text)) {
    if (alpha.contains(tok)) {
      out.push_back(TermSymbol::ranked(tok, alpha.rank_of(tok)));
    } else if (is_int_token(tok) && allow_int_consts) {
      out.push_back(TermSymbol::int_const(*parse_bigint(tok.substr(1))));
    } else {
      raise(Errc::ParseError, "undeclared symbol " + tok);
    }
  }
  return out;
}

std::string traversal_str(const std::vector<TermSymbol>& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i > 0) out += " ";
    out += w[i].str();
  }
  return out;
}

}  // namespace slpt
