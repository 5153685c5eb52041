#include "opal/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <string>

namespace opal {

std::size_t WordBudget::cap() {
  const char* env = std::getenv("OPAL_BUDGET");
  if (!env || !*env) return kDefaultCap;
  char* end = nullptr;
  unsigned long v = std::strtoul(env, &end, 10);
  if (*end != '\0') throw BudgetError("OPAL_BUDGET must be a non-negative integer");
  return std::min<std::size_t>(v, kHardLimit);
}

void WordBudget::check(std::size_t max_len) {
  std::size_t c = cap();
  if (max_len > c)
    throw BudgetError("length " + std::to_string(max_len) + " exceeds the enumeration cap " + std::to_string(c) +
                      " (OPAL_BUDGET, at most " + std::to_string(kHardLimit) + ")");
}

bool brute_chain(const PrecedenceMatrix& m, Letter a0, const Word& y, Letter a1) {
  // chain(l, i, j, r): l [y[i..j)] r is a chain.
  // tail(p, j, r):     y[p] is a letter of the simple chain and y[p+1..j) closes it before r.
  std::map<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>, bool> memo_chain;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, bool> memo_tail;
  std::size_t sig = m.size();
  std::function<bool(Letter, std::size_t, std::size_t, Letter)> chain;
  std::function<bool(std::size_t, std::size_t, Letter)> tail;

  auto gap = [&](Letter l, std::size_t i, std::size_t j, Letter r) { return i == j || chain(l, i, j, r); };

  tail = [&](std::size_t p, std::size_t j, Letter r) {
    auto key = std::tuple{p, j, r.code(sig)};
    if (auto it = memo_tail.find(key); it != memo_tail.end()) return it->second;
    bool ok = m.rel(y[p], r) == Prec::Takes && gap(y[p], p + 1, j, r);
    for (std::size_t q = p + 1; !ok && q < j; ++q)
      ok = m.rel(y[p], y[q]) == Prec::Equals && gap(y[p], p + 1, q, y[q]) && tail(q, j, r);
    return memo_tail[key] = ok;
  };

  chain = [&](Letter l, std::size_t i, std::size_t j, Letter r) {
    auto key = std::tuple{l.code(sig), i, j, r.code(sig)};
    if (auto it = memo_chain.find(key); it != memo_chain.end()) return it->second;
    bool ok = false;
    for (std::size_t p = i; !ok && p < j; ++p)
      ok = m.rel(l, y[p]) == Prec::Yields && gap(l, i, p, y[p]) && tail(p, j, r);
    return memo_chain[key] = ok;
  };

  return !y.empty() && chain(a0, 0, y.size(), a1);
}

std::set<Word> brute_collapse_all_orders(const PrecedenceMatrix& m, const Word& w) {
  std::map<Word, std::set<Word>> memo;
  std::function<const std::set<Word>&(const Word&)> forms = [&](const Word& v) -> const std::set<Word>& {
    if (auto it = memo.find(v); it != memo.end()) return it->second;
    std::set<Word> out;
    for (std::size_t i = 1; i < v.size(); ++i)
      for (std::size_t j = i + 1; j < v.size(); ++j) {
        Word inner(v.begin() + i, v.begin() + j);
        if (!brute_chain(m, v[i - 1], inner, v[j])) continue;
        Word rest(v.begin(), v.begin() + i);
        rest.insert(rest.end(), v.begin() + j, v.end());
        const auto& sub = forms(rest);
        out.insert(sub.begin(), sub.end());
      }
    if (out.empty()) out.insert(v);
    return memo[v] = std::move(out);
  };
  return forms(w);
}

std::optional<Word> brute_include(const Opa& a, const Opa& b, std::size_t max_len) {
  require_same_matrix(a, b);
  WordBudget::check(max_len);
  std::size_t sigma = a.matrix().size();
  Word w;
  // Iterative deepening keeps shortlex order; subtrees where a has no live run are skipped.
  std::function<bool(const RunGraph&, const RunGraph&, std::size_t)> dfs = [&](const RunGraph& ra, const RunGraph& rb,
                                                                           std::size_t depth) {
    if (depth == 0) return ra.accepting(a) && !rb.accepting(b);
    for (std::size_t i = 0; i < sigma; ++i) {
      Letter x = Letter::at(i);
      RunGraph na = ra;
      if (!na.step(a, x)) continue;
      RunGraph nb = rb;
      nb.step(b, x);
      w.push_back(x);
      if (dfs(na, nb, depth - 1)) return true;
      w.pop_back();
    }
    return false;
  };
  RunGraph ra = RunGraph::start(a, a.initial()), rb = RunGraph::start(b, b.initial());
  for (std::size_t n = 0; n <= max_len; ++n) {
    w.clear();
    if (dfs(ra, rb, n)) return w;
  }
  return std::nullopt;
}

namespace {

// Reads u from s on a base symbol with letter `base` that is never reduced, then reduces
// with each lookahead c down to that symbol. Calls out(t, b, c) per reachable end.
template <class Out>
void simulate_from(const Opa& a, State s, Letter base, const Word& u, Out out) {
  const auto& m = a.matrix();
  std::size_t keep = base.is_eps() ? 0 : 1;
  RunGraph r = RunGraph::start(a, s, base.is_eps() ? std::nullopt : std::optional<StackSymbol>(StackSymbol{base, 0}));
  for (Letter x : u)
    if (r.reduces_below(m, x, keep) || !r.step(a, x)) return;
  std::vector<Letter> lookaheads = m.alphabet();
  lookaheads.push_back(Letter::eps());
  for (Letter c : lookaheads) {
    RunGraph end = r;
    end.reduce(a, c, keep);
    if (end.letters().size() != keep) continue;
    Letter b = keep ? end.letters().front() : Letter::eps();
    for (State t = 0; t < a.num_states(); ++t)
      if (end.current() & state_bit(t)) out(t, b, c);
  }
}

}  // namespace

std::vector<std::size_t> brute_cells_of(const Opa& a, const Word& u) {
  CellSpace space(a.num_states(), a.matrix().size());
  std::vector<std::size_t> out;
  std::vector<Letter> bases = a.matrix().alphabet();
  bases.push_back(Letter::eps());
  for (Letter base : bases)
    for (State s = 0; s < a.num_states(); ++s)
      simulate_from(a, s, base, u, [&](State t, Letter b, Letter c) { out.push_back(space.index({s, t, base, b, c})); });
  std::sort(out.begin(), out.end());
  return out;
}

bool brute_in_cell(const Opa& a, const Cell& cell, const Word& u) {
  bool found = false;
  simulate_from(a, cell.s, cell.a, u, [&](State t, Letter b, Letter c) {
    found = found || (t == cell.t && b == cell.b && c == cell.c);
  });
  return found;
}

CellWords brute_cat_all(const Opa& a, std::size_t n) {
  WordBudget::check(n);
  CellWords out;
  for (const auto& u : words_of_length(a.matrix().size(), n))
    for (std::size_t cell : brute_cells_of(a, u)) out[cell].insert(u);
  return out;
}

std::set<Word> brute_cat_cell(const Opa& a, const Cell& cell, std::size_t n) {
  auto all = brute_cat_all(a, n);
  auto it = all.find(CellSpace(a.num_states(), a.matrix().size()).index(cell));
  return it == all.end() ? std::set<Word>{} : it->second;
}

}  // namespace opal
