#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

// End-to-end checks against the built binary (path via SLPTREE_BIN).

namespace {

std::string bin() {
  const char* p = std::getenv("SLPTREE_BIN");
  REQUIRE(p != nullptr);
  return p;
}

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = bin() + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[512];
  while (fgets(buf, sizeof buf, pipe) != nullptr) out += buf;
  int status = pclose(pipe);
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, out};
}

std::string tmpfile_with(const std::string& name, const std::string& content) {
  std::string path = std::string("/tmp/slptree_test_") + name;
  std::ofstream out(path);
  out << content;
  return path;
}

const char* kExample1 =
    "alphabet f:2 a:0\n"
    "S -> A B B a\n"
    "A -> f B\n"
    "B -> f a a\n"
    "start S\n";
// val(S) = f (faa) (faa)... careful: check below asserts the actual string

}  // namespace

TEST_CASE("check and stats on the running example grammar") {
  // straightforward literal grammar for ffaafffaaaa
  std::string path = tmpfile_with("ex1.slp",
                                  "alphabet f:2 a:0\n"
                                  "S -> f f a a f f f a a a a\n"
                                  "start S\n");
  RunResult r = run("check " + path);
  CHECK(r.exit_code == 0);
  CHECK(r.out == "tree: true\n");

  RunResult j = run("check " + path + " --output json");
  CHECK(j.exit_code == 0);
  CHECK(j.out == "{\"tree\":true}\n");

  RunResult s = run("stats " + path);
  CHECK(s.exit_code == 0);
  CHECK(s.out.find("size: 11") != std::string::npos);
  CHECK(s.out.find("len: 11") != std::string::npos);
  CHECK(s.out.find("tree: true") != std::string::npos);
  CHECK(s.out.find("shape: (1,0)") != std::string::npos);
  CHECK(s.out.find("sym a: 6") != std::string::npos);
  CHECK(s.out.find("sym f: 5") != std::string::npos);
}

TEST_CASE("nav and eval on the running example tree") {
  std::string path = tmpfile_with("ex1b.slp",
                                  "alphabet f:2 a:0\n"
                                  "S -> f f a a f f f a a a a\n"
                                  "start S\n");
  CHECK(run("nav " + path + " --op child --node 5 --k 2").out == "11\n");
  CHECK(run("nav " + path + " --op child --node 5 --k 1").out == "6\n");
  CHECK(run("nav " + path + " --op parent --node 6").out == "5\n");
  CHECK(run("nav " + path + " --op size --node 5").out == "7\n");
  CHECK(run("nav " + path + " --op lca --node 6 --node2 11").out == "5\n");
  CHECK(run("nav " + path + " --op label --node 1").out == "f\n");
  CHECK(run("eval " + path + " --interp height").out == "4\n");
  CHECK(run("eval " + path + " --interp depth --node 8").out == "4\n");
  CHECK(run("eval " + path + " --interp strahler").out == "2\n");
}

TEST_CASE("expand and compress round-trip through files") {
  std::string grammar = tmpfile_with("cg.slp", kExample1);
  RunResult e = run("expand " + grammar);
  CHECK(e.exit_code == 0);

  std::string term = tmpfile_with("term.txt", "f(g(a),f(a,b))");
  RunResult c = run("compress " + term + " --algo pairing -o /tmp/slptree_test_out.slp");
  CHECK(c.exit_code == 0);
  RunResult e2 = run("expand /tmp/slptree_test_out.slp");
  CHECK(e2.out == "f g a f a b\n");
  RunResult e3 = run("expand /tmp/slptree_test_out.slp --term");
  CHECK(e3.out == "f(g(a),f(a,b))\n");

  std::string trav = tmpfile_with("trav.txt",
                                  "alphabet f:2 a:0\n"
                                  "f a f a a\n");
  RunResult c2 = run("compress " + trav + " --algo bisection -o /tmp/slptree_test_out2.slp");
  CHECK(c2.exit_code == 0);
  CHECK(run("expand /tmp/slptree_test_out2.slp").out == "f a f a a\n");
}

TEST_CASE("eval bool, lattice, maxplus, plustimes-modp") {
  std::string boolean = tmpfile_with("bool.slp",
                                     "alphabet and:2 or:2 0:0 1:0\n"
                                     "S -> and 1 or 0 1\n"
                                     "start S\n");
  CHECK(run("eval " + boolean + " --interp bool").out == "1\n");

  std::string lattice_tree = tmpfile_with("lat.slp",
                                          "alphabet join:2 meet:2 0:0 1:0 2:0\n"
                                          "S -> join 1 meet 2 1\n"
                                          "start S\n");
  std::string lattice = tmpfile_with("lat.json", "{\"0\":[0,0],\"1\":[0,1],\"2\":[1,1]}");
  CHECK(run("eval " + lattice_tree + " --interp lattice --lattice-file " + lattice).out == "1\n");

  std::string arith = tmpfile_with("arith.slp",
                                   "alphabet +:2 *:2\n"
                                   "intconsts on\n"
                                   "S -> + #2 * #3 #4\n"
                                   "start S\n");
  CHECK(run("eval " + arith + " --interp plustimes-modp --p 101").out == "14\n");

  std::string mp = tmpfile_with("mp.slp",
                                "alphabet max:2 +:2\n"
                                "intconsts on\n"
                                "S -> max #5 + #2 #3\n"
                                "start S\n");
  CHECK(run("eval " + mp + " --interp maxplus").out == "5\n");
}

TEST_CASE("convert in both directions") {
  std::string slp = tmpfile_with("conv.slp",
                                 "alphabet f:2 a:0\n"
                                 "S -> f f a a f f f a a a a\n"
                                 "start S\n");
  RunResult c = run("convert " + slp + " --to tslp -o /tmp/slptree_test_conv.tslp");
  CHECK(c.exit_code == 0);
  RunResult back = run("convert /tmp/slptree_test_conv.tslp --to slp -o /tmp/slptree_test_back.slp");
  CHECK(back.exit_code == 0);
  CHECK(run("expand /tmp/slptree_test_back.slp").out == "f f a a f f f a a a a\n");
}

TEST_CASE("gen comb and phitree from bit files") {
  std::string u = tmpfile_with("u.bits", "10100\n");
  std::string v = tmpfile_with("v.bits", "10010\n");
  RunResult g = run("gen phitree --u " + u + " --v " + v + " -o /tmp/slptree_test_phi.slp");
  CHECK(g.exit_code == 0);
  CHECK(run("expand /tmp/slptree_test_phi.slp").out ==
        "f f f a f f f a f a f a a a a f a a a\n");
  CHECK(run("check /tmp/slptree_test_phi.slp").out == "tree: true\n");

  std::string u2 = tmpfile_with("u2.bits", "10");
  std::string v2 = tmpfile_with("v2.bits", "11");
  RunResult g2 = run("gen comb --u " + u2 + " --v " + v2 + " -o /tmp/slptree_test_comb.slp");
  CHECK(g2.exit_code == 0);
  CHECK(run("expand /tmp/slptree_test_comb.slp").out == "f1 f0 $ 1 1\n");
}

TEST_CASE("exit codes: domain errors 1, usage errors 2") {
  std::string frag = tmpfile_with("frag.slp",
                                  "alphabet f:2 a:0\n"
                                  "S -> f a\n"
                                  "start S\n");
  CHECK(run("check " + frag).exit_code == 0);  // prints tree: false
  CHECK(run("check " + frag).out == "tree: false\n");
  CHECK(run("nav " + frag + " --op parent --node 2").exit_code == 1);  // not a tree
  CHECK(run("check /tmp/slptree_no_such_file_42").exit_code == 1);
  CHECK(run("definitely-not-a-subcommand").exit_code == 2);
  CHECK(run("nav " + frag).exit_code == 2);  // missing required options

  std::string ex1 = tmpfile_with("ex1c.slp",
                                 "alphabet f:2 a:0\n"
                                 "S -> f f a a f f f a a a a\n"
                                 "start S\n");
  CHECK(run("nav " + ex1 + " --op parent --node 1").exit_code == 1);  // IsRoot
}

TEST_CASE("navigation answers on a 2^31-node grammar print exactly") {
  std::string text = "alphabet f:2 a:0\nA0 -> a\n";
  for (int i = 1; i <= 30; ++i)
    text += "A" + std::to_string(i) + " -> f A" + std::to_string(i - 1) + " A" +
            std::to_string(i - 1) + "\n";
  text += "start A30\n";
  std::string path = tmpfile_with("big.slp", text);
  CHECK(run("nav " + path + " --op size --node 1").out == "2147483647\n");
  CHECK(run("eval " + path + " --interp height").out == "30\n");
  CHECK(run("stats " + path).out.find("len: 2147483647") != std::string::npos);
}

TEST_CASE("json output carries the same values") {
  std::string ex1 = tmpfile_with("ex1d.slp",
                                 "alphabet f:2 a:0\n"
                                 "S -> f f a a f f f a a a a\n"
                                 "start S\n");
  CHECK(run("nav " + ex1 + " --op child --node 5 --k 2 --output json").out ==
        "{\"value\":\"11\"}\n");
  CHECK(run("eval " + ex1 + " --interp height --output json").out == "{\"value\":\"4\"}\n");
}
