#include "opal/antichain.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace opal {

Cell CellSpace::cell(std::size_t i) const {
  auto letter = [&](std::size_t code) { return code == sigma_ ? Letter::eps() : Letter::at(code); };
  Cell x;
  x.c = letter(i % l());
  i /= l();
  x.b = letter(i % l());
  i /= l();
  x.a = letter(i % l());
  i /= l();
  x.t = static_cast<State>(i % states_);
  x.s = static_cast<State>(i / states_);
  return x;
}

const char* order_name(OrderKind k) {
  switch (k) {
    case OrderKind::Structural: return "structural";
    case OrderKind::Summary: return "summary";
    case OrderKind::Profile: return "profile";
  }
  return "?";
}

WordOrder::WordOrder(OrderKind kind, const Opa* automaton) : kind_(kind), automaton_(automaton) {
  if (!automaton) throw std::invalid_argument("order needs an automaton");
}

WordKey WordOrder::key(const Word& w) const {
  WordKey k;
  switch (kind_) {
    case OrderKind::Structural:
      k.sig = signature(*automaton_, w);
      k.profile = k.sig.profile;
      break;
    case OrderKind::Summary:
      k.summary = run_summary(*automaton_, w);
      k.profile = k.summary.profile;
      break;
    case OrderKind::Profile:
      k.profile = profile(automaton_->matrix(), w);
      break;
  }
  return k;
}

bool WordOrder::leq(const WordKey& x, const WordKey& y) const {
  switch (kind_) {
    case OrderKind::Structural: return leq_struct(x.sig, y.sig);
    case OrderKind::Summary: return leq_summary(x.summary, y.summary);
    case OrderKind::Profile: return x.profile == y.profile;
  }
  return false;
}

CatVector CatVector::base(const Opa& a, const WordOrder& order) {
  CatVector v(CellSpace(a.num_states(), a.matrix().size()));
  WordKey eps = order.key({});
  for (std::size_t i = 0; i < v.space_.size(); ++i) {
    Cell c = v.space_.cell(i);
    if (c.a == c.b && c.s == c.t) v.cells_[i].push_back({{}, eps});
  }
  return v;
}

CatVector CatVector::empty_like(const CatVector& x) { return CatVector(x.space_); }

bool CatVector::contains(const Cell& c, const Word& w) const {
  const auto& cell = at(c);
  return std::any_of(cell.begin(), cell.end(), [&](const Entry& e) { return e.word == w; });
}

std::size_t CatVector::total_words() const {
  std::size_t n = 0;
  for (const auto& c : cells_) n += c.size();
  return n;
}

std::size_t CatVector::nonempty_cells() const {
  return static_cast<std::size_t>(std::count_if(cells_.begin(), cells_.end(), [](const auto& c) { return !c.empty(); }));
}

std::size_t CatVector::max_cell() const {
  std::size_t n = 0;
  for (const auto& c : cells_) n = std::max(n, c.size());
  return n;
}

namespace {

void combine(const std::vector<Entry>& us, Letter mid, const std::vector<Entry>& vs, std::size_t max_len,
             std::vector<Word>& out) {
  for (const auto& u : us)
    for (const auto& v : vs) {
      if (u.word.size() + 1 + v.word.size() > max_len) continue;
      Word w;
      w.reserve(u.word.size() + 1 + v.word.size());
      w.insert(w.end(), u.word.begin(), u.word.end());
      w.push_back(mid);
      w.insert(w.end(), v.word.begin(), v.word.end());
      out.push_back(std::move(w));
    }
}

void canonical(std::vector<Word>& ws) {
  std::sort(ws.begin(), ws.end(), shortlex_less);
  ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
}

void shift_candidates(const Opa& a, const CatVector& x, const Cell& cell, std::size_t max_len, std::vector<Word>& out) {
  const auto& m = a.matrix();
  std::size_t n = a.num_states();
  for (Letter a1 : m.alphabet())
    for (Letter b1 : m.alphabet()) {
      if (m.rel(a1, b1) != Prec::Equals) continue;
      for (State s1 = 0; s1 < n; ++s1) {
        const auto& us = x.at({cell.s, s1, cell.a, a1, b1});
        if (us.empty()) continue;
        StateSet targets = a.shift(s1, b1);
        for (State t1 = 0; t1 < n; ++t1)
          if (targets & state_bit(t1)) combine(us, b1, x.at({t1, cell.t, b1, cell.b, cell.c}), max_len, out);
      }
    }
}

void chain_candidates(const Opa& a, const CatVector& x, const Cell& cell, std::size_t max_len, std::vector<Word>& out) {
  const auto& m = a.matrix();
  std::size_t n = a.num_states();
  for (Letter b1 : m.alphabet()) {
    if (m.rel(cell.b, b1) != Prec::Yields) continue;
    for (State q = 0; q < n; ++q) {
      const auto& us = x.at({cell.s, q, cell.a, cell.b, b1});
      if (us.empty()) continue;
      StateSet pushed = a.push(q, b1);
      for (State s1 = 0; s1 < n; ++s1) {
        if (!(pushed & state_bit(s1))) continue;
        for (Letter c1 : m.alphabet()) {
          if (m.rel(c1, cell.c) != Prec::Takes) continue;
          for (State t1 = 0; t1 < n; ++t1)
            if (a.pop(t1, q) & state_bit(cell.t)) combine(us, b1, x.at({s1, t1, b1, c1, cell.c}), max_len, out);
        }
      }
    }
  }
}

struct CellOutcome {
  std::vector<Entry> cell;
  std::unordered_set<Word, WordHash> settled;
  StepStats stats;
  bool stable = true;
};

// Entries of one cell grouped by profile, since only words with equal profiles compare.
class Buckets {
 public:
  explicit Buckets(std::vector<Entry> entries) : entries_(std::move(entries)), alive_(entries_.size(), true) {
    for (std::size_t i = 0; i < entries_.size(); ++i) by_profile_[entries_[i].key.profile].push_back(i);
  }
  template <typename F>
  bool any_of(const Profile& p, F&& f) const {
    auto it = by_profile_.find(p);
    if (it == by_profile_.end()) return false;
    for (std::size_t i : it->second)
      if (alive_[i] && f(entries_[i])) return true;
    return false;
  }
  // Removes the entries of profile p matching f, handing each to `gone`.
  template <typename F, typename G>
  void remove_if(const Profile& p, F&& f, G&& gone) {
    auto it = by_profile_.find(p);
    if (it == by_profile_.end()) return;
    for (std::size_t i : it->second)
      if (alive_[i] && f(entries_[i])) {
        alive_[i] = false;
        gone(entries_[i]);
      }
  }
  void add(Entry e) {
    by_profile_[e.key.profile].push_back(entries_.size());
    entries_.push_back(std::move(e));
    alive_.push_back(true);
  }
  std::vector<Entry> take() {
    std::vector<Entry> out;
    for (std::size_t i = 0; i < entries_.size(); ++i)
      if (alive_[i]) out.push_back(std::move(entries_[i]));
    return out;
  }

 private:
  std::vector<Entry> entries_;
  std::vector<bool> alive_;
  std::unordered_map<Profile, std::vector<std::size_t>, ProfileHash> by_profile_;
};

CellOutcome process_cell(const Opa& a, const CatVector& x, const WordOrder& order, const StepOptions& opt,
                         std::size_t idx) {
  Cell cell = x.space().cell(idx);
  std::vector<Word> cands;
  shift_candidates(a, x, cell, opt.max_len, cands);
  chain_candidates(a, x, cell, opt.max_len, cands);
  canonical(cands);

  const auto& old = x[idx];
  CellOutcome out;
  out.settled = x.settled(idx);
  if (cands.empty()) {
    out.cell = old;
    return out;
  }
  std::unordered_set<Word, WordHash> present;
  for (const auto& e : old) present.insert(e.word);
  Buckets before(old), now(old);

  for (auto& w : cands) {
    if (present.contains(w) || out.settled.contains(w)) continue;
    ++out.stats.candidates;
    WordKey k = order.key(w);
    auto below = [&](const Entry& e) { return order.leq(e.key, k); };
    if (!before.any_of(k.profile, below)) out.stable = false;
    if (opt.prune) {
      if (now.any_of(k.profile, below)) {
        ++out.stats.pruned;
        out.settled.insert(std::move(w));
        continue;
      }
      now.remove_if(
          k.profile, [&](const Entry& e) { return order.leq(k, e.key); },
          [&](Entry& e) {
            ++out.stats.pruned;
            out.settled.insert(std::move(e.word));
          });
    }
    now.add({std::move(w), std::move(k)});
    ++out.stats.inserted;
  }
  out.cell = now.take();
  std::sort(out.cell.begin(), out.cell.end(), [](const Entry& p, const Entry& q) { return shortlex_less(p.word, q.word); });
  return out;
}

StepResult assemble(const CatVector& x, std::vector<CellOutcome>& outcomes) {
  StepResult r{CatVector::empty_like(x), true, {}};
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    auto& o = outcomes[i];
    r.stable = r.stable && o.stable;
    r.stats.candidates += o.stats.candidates;
    r.stats.inserted += o.stats.inserted;
    r.stats.pruned += o.stats.pruned;
    r.next[i] = std::move(o.cell);
    r.next.settled(i) = std::move(o.settled);
  }
  r.stats.total_words = r.next.total_words();
  r.stats.nonempty_cells = r.next.nonempty_cells();
  r.stats.max_cell = r.next.max_cell();
  return r;
}

}  // namespace

std::vector<Word> cat_shift(const Opa& a, const CatVector& x, const Cell& cell) {
  std::vector<Word> out;
  shift_candidates(a, x, cell, SIZE_MAX, out);
  canonical(out);
  return out;
}

std::vector<Word> cat_chain(const Opa& a, const CatVector& x, const Cell& cell) {
  std::vector<Word> out;
  chain_candidates(a, x, cell, SIZE_MAX, out);
  canonical(out);
  return out;
}

StepResult cat_step(const Opa& a, const CatVector& x, const WordOrder& order, const StepOptions& opt) {
  std::vector<CellOutcome> outcomes(x.space().size());
  long n = static_cast<long>(outcomes.size());
#pragma omp parallel for schedule(dynamic, 32)
  for (long i = 0; i < n; ++i) outcomes[i] = process_cell(a, x, order, opt, static_cast<std::size_t>(i));
  return assemble(x, outcomes);
}

namespace reference {
StepResult cat_step_serial(const Opa& a, const CatVector& x, const WordOrder& order, const StepOptions& opt) {
  std::vector<CellOutcome> outcomes;
  outcomes.reserve(x.space().size());
  for (std::size_t i = 0; i < x.space().size(); ++i) outcomes.push_back(process_cell(a, x, order, opt, i));
  return assemble(x, outcomes);
}
}  // namespace reference

bool basis_check(const std::vector<Word>& x, const std::vector<Word>& y, const WordOrder& order) {
  std::unordered_set<Word, WordHash> ys(y.begin(), y.end());
  for (const auto& w : x)
    if (!ys.contains(w)) return false;
  std::vector<WordKey> xk;
  for (const auto& w : x) xk.push_back(order.key(w));
  for (const auto& w : y) {
    WordKey k = order.key(w);
    if (std::none_of(xk.begin(), xk.end(), [&](const WordKey& e) { return order.leq(e, k); })) return false;
  }
  return true;
}

namespace {

// Shortlex-least word of the final cells rejected by `member`.
void harvest(const Opa& a, const CatVector& x, const std::function<bool(const Word&)>& member, InclusionResult& r) {
  const auto& space = x.space();
  r.final_words = 0;
  r.witness.reset();
  for (State qi = 0; qi < a.num_states(); ++qi) {
    if (!a.is_initial(qi)) continue;
    for (State qf = 0; qf < a.num_states(); ++qf) {
      if (!a.is_final(qf)) continue;
      for (const auto& e : x[space.index({qi, qf, Letter::eps(), Letter::eps(), Letter::eps()})]) {
        ++r.final_words;
        if (member(e.word)) continue;
        if (!r.witness || shortlex_less(e.word, *r.witness)) {
          r.witness = e.word;
          r.initial = qi;
          r.final = qf;
        }
      }
    }
  }
}

InclusionResult fixpoint(const Opa& a, const WordOrder& order, const std::function<bool(const Word&)>& member,
                         const InclusionOptions& opt) {
  InclusionResult r;
  CatVector x = CatVector::base(a, order);
  StepOptions so{opt.prune, SIZE_MAX};
  bool early = opt.stop_at_witness.value_or(opt.prune);
  while (true) {
    // Every stored word of a final cell is accepted, so a rejected one settles the answer.
    if (early) {
      harvest(a, x, member, r);
      if (r.witness) break;
    }
    if (opt.max_iterations && r.iterations.size() >= opt.max_iterations)
      throw std::runtime_error("fixpoint did not stabilize within " + std::to_string(opt.max_iterations) + " iterations");
    StepResult step = opt.parallel ? cat_step(a, x, order, so) : reference::cat_step_serial(a, x, order, so);
    r.iterations.push_back(step.stats);
    if (step.stable) break;
    x = std::move(step.next);
  }
  if (!r.witness) harvest(a, x, member, r);
  r.holds = !r.witness;
  if (r.witness && (!accepts(a, *r.witness) || member(*r.witness)))
    throw std::logic_error("witness failed re-verification");
  return r;
}

}  // namespace

InclusionResult include(const Opa& a, const Opa& b, const InclusionOptions& opt) {
  require_same_matrix(a, b);
  WordOrder order(opt.order, &b);
  return fixpoint(a, order, [&](const Word& w) { return accepts(b, w); }, opt);
}

InclusionResult universality(const Opa& b, const InclusionOptions& opt) {
  Opa all = universal_opa(b.matrix_ptr());
  return include(all, b, opt);
}

InclusionResult emptiness(const Opa& a, const InclusionOptions& opt) {
  WordOrder order(OrderKind::Profile, &a);
  return fixpoint(a, order, [](const Word&) { return false; }, opt);
}

}  // namespace opal
