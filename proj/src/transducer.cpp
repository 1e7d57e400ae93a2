#include "slpt/transducer.hpp"

#include "slpt/slp_ops.hpp"

namespace slpt {

Slp apply_transducer(const Slp& slp, const FunctionalTransducer& t) {
  ValidationReport rep = require_valid(slp);

  // Totality over the occurring alphabet, for every state.
  std::vector<TermSymbol> alpha = occurring_symbols(slp);
  for (int q = 0; q < t.num_states(); ++q)
    for (const auto& s : alpha)
      if (!t.has_step(q, s))
        raise(Errc::UndefinedTransition, "state " + std::to_string(q) + ", symbol " + s.str());

  // End state of running t from q over val(A), for reachable (A, q) pairs;
  // unreachable productions may use symbols outside the occurring alphabet.
  const std::size_t n = slp.nt_count();
  const int nq = t.num_states();
  std::vector<bool> reachable(n, false);
  {
    std::vector<std::uint32_t> stack{slp.start()};
    reachable[slp.start()] = true;
    while (!stack.empty()) {
      std::uint32_t a = stack.back();
      stack.pop_back();
      for (const auto& item : slp.rhs(a))
        if (const NtRef* r = std::get_if<NtRef>(&item))
          if (!reachable[r->id]) {
            reachable[r->id] = true;
            stack.push_back(r->id);
          }
    }
  }
  std::vector<int> endstate(n * nq, -1);
  auto end_at = [&](std::uint32_t a, int q) -> int& { return endstate[a * nq + q]; };
  for (std::uint32_t a : rep.topo_order) {
    if (!reachable[a]) continue;
    for (int q = 0; q < nq; ++q) {
      int cur = q;
      for (const auto& item : slp.rhs(a)) {
        if (const TermSymbol* sym = std::get_if<TermSymbol>(&item))
          cur = t.step(cur, *sym).next;
        else
          cur = end_at(std::get<NtRef>(item).id, cur);
      }
      end_at(a, q) = cur;
    }
  }

  // Image nonterminal per reachable (A, q) pair.
  Slp out;
  std::vector<std::int64_t> image(n * nq, -1);
  std::vector<std::pair<std::uint32_t, int>> todo;
  auto image_nt = [&](std::uint32_t a, int q) {
    std::int64_t& slot = image[a * nq + q];
    if (slot < 0) {
      slot = out.fresh_nonterminal(slp.nt_name(a) + "@q" + std::to_string(q));
      todo.push_back({a, q});
    }
    return static_cast<std::uint32_t>(slot);
  };
  std::uint32_t root = image_nt(slp.start(), t.initial());
  while (!todo.empty()) {
    auto [a, q] = todo.back();
    todo.pop_back();
    std::vector<RhsItem> items;
    int cur = q;
    for (const auto& item : slp.rhs(a)) {
      if (const TermSymbol* sym = std::get_if<TermSymbol>(&item)) {
        const auto& st = t.step(cur, *sym);
        for (const auto& o : st.output) items.push_back(item_term(o));
        cur = st.next;
      } else {
        std::uint32_t id = std::get<NtRef>(item).id;
        items.push_back(item_nt(image_nt(id, cur)));
        cur = end_at(id, cur);
      }
    }
    out.set_production(image[a * nq + q] >= 0 ? static_cast<std::uint32_t>(image[a * nq + q]) : 0,
                       std::move(items));
  }

  std::uint32_t s = out.fresh_nonterminal("IMG");
  std::vector<RhsItem> start_items{item_nt(root)};
  for (const auto& o : t.final_output(end_at(slp.start(), t.initial())))
    start_items.push_back(item_term(o));
  out.set_production(s, std::move(start_items));
  out.set_start(s);
  return out;
}

}  // namespace slpt
