// Command-line front end: every subcommand is a thin wrapper over the library
// so scripted runs and the test harness see exactly the library's answers.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "slpt/bp.hpp"
#include "slpt/evaluate.hpp"
#include "slpt/generators.hpp"
#include "slpt/slp_ops.hpp"
#include "slpt/text_format.hpp"
#include "slpt/tree_shape.hpp"
#include "slpt/tslp.hpp"

using nlohmann::json;
using namespace slpt;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) raise(Errc::ParseError, "cannot open " + path);
  out << text;
}

bool looks_like_grammar(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return line.compare(first, 8, "alphabet") == 0 || line.compare(first, 5, "start") == 0;
  }
  return false;
}

// header lines (alphabet/intconsts) followed by traversal tokens
std::vector<TermSymbol> parse_traversal_file(const std::string& text) {
  RankedAlphabet alpha;
  std::string rest;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "alphabet") {
      std::string entry;
      while (ls >> entry) {
        std::size_t colon = entry.rfind(':');
        if (colon == std::string::npos) raise(Errc::ParseError, "bad alphabet entry " + entry);
        alpha.add(entry.substr(0, colon), std::stoi(entry.substr(colon + 1)));
      }
    } else if (tok == "intconsts") {
      std::string v;
      ls >> v;
      alpha.allow_int_consts = v == "on";
    } else {
      rest += line + "\n";
    }
  }
  return parse_traversal(rest, alpha, alpha.allow_int_consts);
}

Slp load_slp(const std::string& path) { return parse_slp_text(read_file(path)); }

Slp bits_slp(const std::string& path) {
  std::string text = read_file(path);
  if (looks_like_grammar(text)) return parse_slp_text(text);
  std::vector<TermSymbol> w;
  for (char c : text) {
    if (c == '0' || c == '1')
      w.push_back(bit_symbol(c - '0'));
    else if (!isspace(static_cast<unsigned char>(c)))
      raise(Errc::ParseError, std::string("unexpected character '") + c + "' in bit string");
  }
  if (w.empty()) raise(Errc::EmptyInput, path);
  return literal_slp(w);
}

struct Output {
  bool as_json = false;
  json obj = json::object();
  std::vector<std::string> lines;

  void put(const std::string& key, const std::string& value, bool bare = false) {
    obj[key] = value;
    lines.push_back(bare ? value : key + ": " + value);
  }
  void put_bool(const std::string& key, bool value) {
    obj[key] = value;
    lines.push_back(key + ": " + (value ? "true" : "false"));
  }
  void flush() const {
    if (as_json) {
      std::cout << obj.dump() << "\n";
    } else {
      for (const auto& l : lines) std::cout << l << "\n";
    }
  }
};

LatticeSpec load_lattice(const std::string& path) {
  json j = json::parse(read_file(path));
  LatticeSpec spec;
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::vector<int> vec;
    for (const auto& b : it.value()) vec.push_back(b.get<int>());
    spec.elements.push_back({it.key(), vec});
  }
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SLP-compressed tree toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string output_format = "plain";
  app.add_option("--output", output_format, "plain or json")->envname("SLPTREE_OUTPUT");

  std::string file, out_path, op, interp_name, lattice_file, to, algo_name, gen_kind, ufile, vfile;
  std::string node_s, node2_s, k_s = "1", p_s, limit_s = "1000000";
  bool as_term = false;

  CLI::App* check = app.add_subcommand("check", "is the value a tree?");
  check->add_option("file", file)->required();

  CLI::App* stats = app.add_subcommand("stats", "grammar and value statistics");
  stats->add_option("file", file)->required();

  CLI::App* expand_cmd = app.add_subcommand("expand", "print the value");
  expand_cmd->add_option("file", file)->required();
  expand_cmd->add_option("--limit", limit_s, "max symbols to expand");
  expand_cmd->add_flag("--term", as_term, "print term syntax instead of a traversal");

  CLI::App* nav = app.add_subcommand("nav", "navigation queries");
  nav->add_option("file", file)->required();
  nav->add_option("--op", op, "parent|child|childrank|size|lca|label")->required();
  nav->add_option("--node", node_s)->required();
  nav->add_option("--k", k_s);
  nav->add_option("--node2", node2_s);

  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate the compressed tree");
  eval_cmd->add_option("file", file)->required();
  eval_cmd
      ->add_option("--interp", interp_name,
                   "height|depth|strahler|bool|lattice|maxplus|plustimes-modp")
      ->required();
  eval_cmd->add_option("--p", p_s, "prime modulus for plustimes-modp");
  eval_cmd->add_option("--node", node_s, "node for --interp depth");
  eval_cmd->add_option("--lattice-file", lattice_file, "JSON element -> bit vector");

  CLI::App* convert = app.add_subcommand("convert", "convert between SLP and TSLP");
  convert->add_option("file", file)->required();
  convert->add_option("--to", to, "tslp|slp")->required();
  convert->add_option("-o,--out", out_path);

  CLI::App* compress_cmd = app.add_subcommand("compress", "compress a tree or traversal");
  compress_cmd->add_option("file", file)->required();
  compress_cmd->add_option("--algo", algo_name, "bisection|pairing")->required();
  compress_cmd->add_option("-o,--out", out_path);

  CLI::App* gen = app.add_subcommand("gen", "generate comb / phi-gap tree grammars");
  gen->add_option("kind", gen_kind, "comb|phitree")->required();
  gen->add_option("--u", ufile)->required();
  gen->add_option("--v", vfile)->required();
  gen->add_option("-o,--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  Output o;
  o.as_json = output_format == "json";

  try {
    auto need_big = [](const std::string& s, const char* what) {
      auto v = parse_bigint(s);
      if (!v) raise(Errc::ParseError, std::string("bad ") + what + ": " + s);
      return *v;
    };

    if (*check) {
      o.put_bool("tree", is_tree(load_slp(file)));
    } else if (*stats) {
      Slp g = load_slp(file);
      ValidationReport rep = require_valid(g);
      o.put("size", std::to_string(g.size()));
      o.put("len", rep.lengths[g.start()].str());
      o.put_bool("tree", is_tree(g));
      o.put("shape", compute_shapes(g)[g.start()].str());
      o.put("depth", std::to_string(grammar_depth(g)));
      json hist = json::object();
      for (const auto& sym : occurring_symbols(g)) {
        BigInt c = count_occurrences(g, pred_of({sym}));
        hist[sym.str()] = c.str();
        o.lines.push_back("sym " + sym.str() + ": " + c.str());
      }
      o.obj["histogram"] = hist;
    } else if (*expand_cmd) {
      Slp g = load_slp(file);
      auto limit = to_u64(need_big(limit_s, "limit"));
      if (!limit) raise(Errc::ParseError, "limit out of range");
      auto w = slpt::expand(g, *limit);
      if (as_term)
        o.put("value", term_str(tree_of_preorder(w)), true);
      else
        o.put("value", traversal_str(w), true);
    } else if (*nav) {
      Slp g = load_slp(file);
      DfudsIndex idx(g);
      BigInt node = need_big(node_s, "node");
      std::string value;
      if (op == "parent")
        value = idx.parent(node).str();
      else if (op == "child")
        value = idx.kth_child(node, need_big(k_s, "k")).str();
      else if (op == "childrank")
        value = idx.child_rank(node).str();
      else if (op == "size")
        value = idx.subtree_size(node).str();
      else if (op == "lca")
        value = idx.lca(node, need_big(node2_s, "node2")).str();
      else if (op == "label")
        value = idx.label_at(node).str();
      else
        raise(Errc::ParseError, "unknown nav op " + op);
      o.put("value", value, true);
    } else if (*eval_cmd) {
      Slp g = load_slp(file);
      std::string value;
      if (interp_name == "height")
        value = height(g).str();
      else if (interp_name == "depth")
        value = node_depth(g, need_big(node_s, "node")).str();
      else if (interp_name == "strahler")
        value = strahler(g).str();
      else if (interp_name == "bool")
        value = std::to_string(eval_bool(g));
      else if (interp_name == "lattice")
        value = eval_lattice(g, load_lattice(lattice_file));
      else if (interp_name == "maxplus")
        value = eval_max_plus(g).str();
      else if (interp_name == "plustimes-modp")
        value = eval_plus_times_mod(g, need_big(p_s, "p")).str();
      else
        raise(Errc::ParseError, "unknown interpretation " + interp_name);
      o.put("value", value, true);
    } else if (*convert) {
      std::string text = read_file(file);
      std::string converted;
      if (to == "slp")
        converted = slp_text(tslp_to_slp(parse_tslp_text(text)));
      else if (to == "tslp")
        converted = tslp_text(slp_to_tslp(parse_slp_text(text)));
      else
        raise(Errc::ParseError, "unknown conversion target " + to);
      if (o.as_json && (out_path.empty() || out_path == "-")) {
        o.obj["grammar"] = converted;
      } else {
        write_output(out_path, converted);
      }
    } else if (*compress_cmd) {
      std::string text = read_file(file);
      std::vector<TermSymbol> w;
      if (looks_like_grammar(text) || text.find("alphabet") != std::string::npos)
        w = parse_traversal_file(text);
      else
        w = preorder_of(parse_term(text));
      CompressAlgo algo;
      if (algo_name == "bisection")
        algo = CompressAlgo::Bisection;
      else if (algo_name == "pairing")
        algo = CompressAlgo::Pairing;
      else
        raise(Errc::ParseError, "unknown algorithm " + algo_name);
      std::string out_text = slp_text(compress(w, algo));
      if (o.as_json && (out_path.empty() || out_path == "-"))
        o.obj["grammar"] = out_text;
      else
        write_output(out_path, out_text);
    } else if (*gen) {
      Slp u = bits_slp(ufile);
      Slp v = bits_slp(vfile);
      Slp g;
      if (gen_kind == "comb")
        g = comb_slp(u, v);
      else if (gen_kind == "phitree")
        g = phi_gap_tree_slp(u, v);
      else
        raise(Errc::ParseError, "unknown generator " + gen_kind);
      std::string out_text = slp_text(g);
      if (o.as_json && (out_path.empty() || out_path == "-"))
        o.obj["grammar"] = out_text;
      else
        write_output(out_path, out_text);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  o.flush();
  return 0;
}
