#pragma once

#include <map>
#include <vector>

#include "slpt/slp.hpp"

namespace slpt {

// Deterministic finite-state transducer with word outputs on transitions and
// optional end-of-input outputs per state. Must be total on the symbols that
// occur in the grammars it is applied to.
class FunctionalTransducer {
 public:
  explicit FunctionalTransducer(int num_states = 1, int initial = 0)
      : num_states_(num_states), initial_(initial) {}

  void add_transition(int state, const TermSymbol& in, int next,
                      std::vector<TermSymbol> output) {
    trans_[{state, in}] = {next, std::move(output)};
  }
  void set_final_output(int state, std::vector<TermSymbol> output) {
    final_[state] = std::move(output);
  }

  // Single-state transducer applying sym -> image(sym) pointwise.
  static FunctionalTransducer homomorphism(
      const std::vector<std::pair<TermSymbol, std::vector<TermSymbol>>>& images) {
    FunctionalTransducer t(1, 0);
    for (const auto& [in, out] : images) t.add_transition(0, in, 0, out);
    return t;
  }

  int num_states() const { return num_states_; }
  int initial() const { return initial_; }

  struct Step {
    int next;
    std::vector<TermSymbol> output;
  };
  const Step& step(int state, const TermSymbol& in) const {
    auto it = trans_.find({state, in});
    if (it == trans_.end())
      raise(Errc::UndefinedTransition, "state " + std::to_string(state) + ", symbol " + in.str());
    return it->second;
  }
  bool has_step(int state, const TermSymbol& in) const { return trans_.count({state, in}) != 0; }
  const std::vector<TermSymbol>& final_output(int state) const {
    static const std::vector<TermSymbol> kEmpty;
    auto it = final_.find(state);
    return it == final_.end() ? kEmpty : it->second;
  }

  std::vector<TermSymbol> run(const std::vector<TermSymbol>& w) const {
    std::vector<TermSymbol> out;
    int q = initial_;
    for (const auto& s : w) {
      const Step& st = step(q, s);
      out.insert(out.end(), st.output.begin(), st.output.end());
      q = st.next;
    }
    const auto& fin = final_output(q);
    out.insert(out.end(), fin.begin(), fin.end());
    return out;
  }

 private:
  int num_states_;
  int initial_;
  std::map<std::pair<int, TermSymbol>, Step> trans_;
  std::map<int, std::vector<TermSymbol>> final_;
};

// SLP for t(val(slp)); size O(|slp|) with the constant depending on t.
Slp apply_transducer(const Slp& slp, const FunctionalTransducer& t);

}  // namespace slpt
