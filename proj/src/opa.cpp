#include "opal/opa.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <functional>
#include <map>

namespace opal {

namespace {

template <typename F>
void for_each_state(StateSet s, F&& f) {
  while (s) {
    State q = static_cast<State>(std::countr_zero(s));
    s &= s - 1;
    f(q);
  }
}

}  // namespace

Opa::Opa(std::shared_ptr<const PrecedenceMatrix> m, std::size_t states) : matrix_(std::move(m)) {
  if (!matrix_) throw OpaError("automaton needs a precedence matrix");
  if (states > kMaxStates) throw OpaError("at most 64 states are supported");
  for (std::size_t i = 0; i < states; ++i) names_.push_back("q" + std::to_string(i));
  push_.assign(states * sigma(), 0);
  shift_.assign(states * sigma(), 0);
  pop_.assign(states * states, 0);
}

Opa::Opa(std::shared_ptr<const PrecedenceMatrix> m, const OpaDraft& d) : Opa(std::move(m), d.states.size()) {
  names_ = d.states;
  std::map<std::string, State> idx;
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (!idx.emplace(names_[i], static_cast<State>(i)).second)
      throw OpaError("state '" + names_[i] + "' declared twice");
  auto state = [&](const std::string& s, std::size_t line) {
    auto it = idx.find(s);
    if (it == idx.end())
      throw OpaError("unknown state '" + s + "'" + (line ? " on line " + std::to_string(line) : ""));
    return it->second;
  };
  auto letter = [&](const std::string& s, std::size_t line) {
    auto l = matrix_->find(s);
    if (!l || l->is_eps())
      throw OpaError("unknown letter '" + s + "'" + (line ? " on line " + std::to_string(line) : ""));
    return *l;
  };
  for (const auto& s : d.initial) set_initial(state(s, 0));
  for (const auto& s : d.final) set_final(state(s, 0));
  for (const auto& e : d.push) add_push(state(e.from, e.line), letter(e.label, e.line), state(e.to, e.line));
  for (const auto& e : d.shift) add_shift(state(e.from, e.line), letter(e.label, e.line), state(e.to, e.line));
  for (const auto& e : d.pop) add_pop(state(e.from, e.line), state(e.label, e.line), state(e.to, e.line));
}

std::optional<State> Opa::find_state(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<State>(i);
  return std::nullopt;
}

void Opa::check_state(State q) const {
  if (q >= num_states()) throw OpaError("state index out of range");
}

void Opa::add_push(State q, Letter a, State to) {
  check_state(q);
  check_state(to);
  if (a.is_eps() || a.index() >= sigma()) throw OpaError("push edge needs a letter of the alphabet");
  push_[q * sigma() + a.index()] |= state_bit(to);
}

void Opa::add_shift(State q, Letter a, State to) {
  check_state(q);
  check_state(to);
  if (a.is_eps() || a.index() >= sigma()) throw OpaError("shift edge needs a letter of the alphabet");
  shift_[q * sigma() + a.index()] |= state_bit(to);
}

void Opa::add_pop(State q, State stored, State to) {
  check_state(q);
  check_state(stored);
  check_state(to);
  pop_[q * num_states() + stored] |= state_bit(to);
}

std::size_t Opa::edge_count() const {
  std::size_t n = 0;
  for (auto v : {&push_, &shift_, &pop_})
    for (StateSet s : *v) n += std::popcount(s);
  return n;
}

bool Opa::is_deterministic() const {
  if (std::popcount(initial_) > 1) return false;
  for (auto v : {&push_, &shift_, &pop_})
    for (StateSet s : *v)
      if (std::popcount(s) > 1) return false;
  return true;
}

OpKind op_kind(const PrecedenceMatrix& m, Letter top, Letter next) {
  switch (m.rel(top, next)) {
    case Prec::Yields: return OpKind::Push;
    case Prec::Equals: return OpKind::Shift;
    case Prec::Takes: return OpKind::Pop;
  }
  return OpKind::Pop;
}

std::vector<Configuration> successors(const Opa& a, const Configuration& c) {
  std::vector<Configuration> out;
  Letter top = c.stack.empty() ? Letter::eps() : c.stack.back().letter;
  Letter next = c.input.empty() ? Letter::eps() : c.input.front();
  if (top.is_eps() && next.is_eps()) return out;
  switch (op_kind(a.matrix(), top, next)) {
    case OpKind::Push:
      for_each_state(a.push(c.state, next), [&](State to) {
        Configuration d{to, Word(c.input.begin() + 1, c.input.end()), c.stack};
        d.stack.push_back({next, c.state});
        out.push_back(std::move(d));
      });
      break;
    case OpKind::Shift:
      for_each_state(a.shift(c.state, next), [&](State to) {
        Configuration d{to, Word(c.input.begin() + 1, c.input.end()), c.stack};
        d.stack.back().letter = next;
        out.push_back(std::move(d));
      });
      break;
    case OpKind::Pop:
      for_each_state(a.pop(c.state, c.stack.back().state), [&](State to) {
        Configuration d{to, c.input, c.stack};
        d.stack.pop_back();
        out.push_back(std::move(d));
      });
      break;
  }
  return out;
}

RunSet RunSet::start(StateSet states) {
  RunSet r;
  for_each_state(states, [&](State q) { r.threads_.push_back({q, {}}); });
  return r;
}

RunSet RunSet::start(State q, std::optional<StackSymbol> base) {
  RunSet r;
  Thread t{q, {}};
  if (base) {
    r.letters_.push_back(base->letter);
    t.stored.push_back(base->state);
  }
  r.threads_.push_back(std::move(t));
  return r;
}

void RunSet::normalize() {
  std::sort(threads_.begin(), threads_.end());
  threads_.erase(std::unique(threads_.begin(), threads_.end()), threads_.end());
}

bool RunSet::reduces_below(const PrecedenceMatrix& m, Letter next, std::size_t keep) const {
  std::size_t h = letters_.size();
  while (h > 0 && m.rel(letters_[h - 1], next) == Prec::Takes) --h;
  return h < keep;
}

void RunSet::reduce(const Opa& a, Letter next, std::size_t keep) {
  const auto& m = a.matrix();
  while (letters_.size() > keep && m.rel(letters_.back(), next) == Prec::Takes) {
    std::vector<Thread> out;
    for (const auto& t : threads_) {
      for_each_state(a.pop(t.state, t.stored.back()), [&](State to) {
        Thread u{to, t.stored};
        u.stored.pop_back();
        out.push_back(std::move(u));
      });
    }
    letters_.pop_back();
    threads_ = std::move(out);
    normalize();
  }
}

bool RunSet::step(const Opa& a, Letter next) {
  reduce(a, next);
  std::vector<Thread> out;
  Letter top = letters_.empty() ? Letter::eps() : letters_.back();
  if (op_kind(a.matrix(), top, next) == OpKind::Push) {
    for (const auto& t : threads_) {
      for_each_state(a.push(t.state, next), [&](State to) {
        Thread u{to, t.stored};
        u.stored.push_back(t.state);
        out.push_back(std::move(u));
      });
    }
    letters_.push_back(next);
  } else {
    for (const auto& t : threads_)
      for_each_state(a.shift(t.state, next), [&](State to) { out.push_back({to, t.stored}); });
    letters_.back() = next;
  }
  threads_ = std::move(out);
  normalize();
  return !threads_.empty();
}

bool RunSet::accepting(const Opa& a) const {
  RunSet r = *this;
  r.reduce(a, Letter::eps());
  return std::any_of(r.threads_.begin(), r.threads_.end(), [&](const Thread& t) { return a.is_final(t.state); });
}

RunGraph RunGraph::start(const Opa& a, StateSet states) {
  RunGraph g;
  g.states_ = a.num_states();
  g.rel_[0][0] = states;
  return g;
}

RunGraph RunGraph::start(const Opa& a, State q, std::optional<StackSymbol> base) {
  RunGraph g;
  g.states_ = a.num_states();
  if (!base) {
    g.rel_[0][0] = state_bit(q);
    return g;
  }
  g.rel_[0][0] = state_bit(base->state);
  g.letters_.push_back(base->letter);
  g.rel_.emplace_back(g.states_, 0);
  g.rel_[1][base->state] = state_bit(q);
  return g;
}

StateSet RunGraph::current() const {
  if (letters_.empty()) return rel_[0][0];
  StateSet c = 0;
  for (StateSet s : rel_.back()) c |= s;
  return c;
}

StateSet RunGraph::stored_at(std::size_t i) const {
  StateSet out = 0;
  for (State s = 0; s < rel_[i].size(); ++s)
    if (rel_[i][s]) out |= state_bit(s);
  return out;
}

void RunGraph::trim() {
  std::size_t h = letters_.size();
  StateSet reach = rel_[0][0];
  for (std::size_t i = 1; i <= h; ++i) {
    StateSet next = 0;
    for (State s = 0; s < states_; ++s) {
      if (!(reach & state_bit(s))) rel_[i][s] = 0;
      next |= rel_[i][s];
    }
    reach = next;
  }
  StateSet alive = ~StateSet{0};
  for (std::size_t i = h; i >= 1; --i) {
    StateSet here = 0;
    for (State s = 0; s < states_; ++s) {
      rel_[i][s] &= alive;
      if (rel_[i][s]) here |= state_bit(s);
    }
    alive = here;
  }
  rel_[0][0] &= alive;
}

bool RunGraph::reduces_below(const PrecedenceMatrix& m, Letter next, std::size_t keep) const {
  std::size_t h = letters_.size();
  while (h > 0 && m.rel(letters_[h - 1], next) == Prec::Takes) --h;
  return h < keep;
}

void RunGraph::reduce(const Opa& a, Letter next, std::size_t keep) {
  const auto& m = a.matrix();
  while (letters_.size() > keep && m.rel(letters_.back(), next) == Prec::Takes) {
    std::size_t h = letters_.size();
    std::vector<StateSet> popped(states_, 0);
    for (State s = 0; s < states_; ++s)
      for_each_state(rel_[h][s], [&](State q) { popped[s] |= a.pop(q, s); });
    for (auto& targets : rel_[h - 1]) {
      StateSet out = 0;
      for_each_state(targets, [&](State s) { out |= popped[s]; });
      targets = out;
    }
    rel_.pop_back();
    letters_.pop_back();
    trim();
  }
}

bool RunGraph::step(const Opa& a, Letter next) {
  reduce(a, next);
  Letter top = letters_.empty() ? Letter::eps() : letters_.back();
  if (op_kind(a.matrix(), top, next) == OpKind::Push) {
    std::vector<StateSet> level(states_, 0);
    for_each_state(current(), [&](State q) { level[q] = a.push(q, next); });
    rel_.push_back(std::move(level));
    letters_.push_back(next);
  } else {
    for (auto& targets : rel_.back()) {
      StateSet out = 0;
      for_each_state(targets, [&](State q) { out |= a.shift(q, next); });
      targets = out;
    }
    letters_.back() = next;
  }
  trim();
  return !empty();
}

bool RunGraph::accepting(const Opa& a) const {
  RunGraph g = *this;
  g.reduce(a, Letter::eps());
  return (g.current() & a.final()) != 0;
}

std::vector<RunSet::Thread> RunGraph::threads() const {
  std::vector<RunSet::Thread> out;
  std::vector<State> path;
  std::size_t h = letters_.size();
  std::function<void(std::size_t, StateSet)> walk = [&](std::size_t level, StateSet choices) {
    for_each_state(choices, [&](State s) {
      if (level == h) {
        out.push_back({s, path});
        return;
      }
      path.push_back(s);
      walk(level + 1, rel_[level + 1][s]);
      path.pop_back();
    });
  };
  walk(0, rel_[0][0]);
  std::sort(out.begin(), out.end());
  return out;
}

bool accepts(const Opa& a, const Word& w) {
  RunGraph r = RunGraph::start(a, a.initial());
  for (Letter x : w)
    if (!r.step(a, x)) return false;
  return r.accepting(a);
}

std::optional<std::vector<Configuration>> run_trace(const Opa& a, const Word& w) {
  struct Node {
    Configuration conf;
    std::size_t parent;
  };
  std::vector<Node> nodes;
  std::deque<std::size_t> queue;
  for_each_state(a.initial(), [&](State q) {
    nodes.push_back({{q, w, {}}, SIZE_MAX});
    queue.push_back(nodes.size() - 1);
  });
  while (!queue.empty()) {
    std::size_t i = queue.front();
    queue.pop_front();
    const auto& c = nodes[i].conf;
    if (c.input.empty() && c.stack.empty() && a.is_final(c.state)) {
      std::vector<Configuration> run;
      for (std::size_t j = i; j != SIZE_MAX; j = nodes[j].parent) run.push_back(nodes[j].conf);
      std::reverse(run.begin(), run.end());
      return run;
    }
    // Every run on the same input takes the same number of moves, so the search
    // tree has no repeated configurations at different depths; siblings may repeat.
    auto next = successors(a, c);
    std::sort(next.begin(), next.end(), [](const Configuration& x, const Configuration& y) {
      return std::tie(x.state, x.stack) < std::tie(y.state, y.stack);
    });
    next.erase(std::unique(next.begin(), next.end()), next.end());
    for (auto& d : next) {
      nodes.push_back({std::move(d), i});
      queue.push_back(nodes.size() - 1);
    }
  }
  return std::nullopt;
}

std::string format_stack(const Opa& a, const std::vector<StackSymbol>& stack) {
  std::string out;
  for (auto it = stack.rbegin(); it != stack.rend(); ++it)
    out += "⟨" + a.state_name(it->state) + "," + a.matrix().format_letter(it->letter) + "⟩";
  return out + "⊥";
}

Opa universal_opa(std::shared_ptr<const PrecedenceMatrix> m) {
  OpaDraft d;
  d.states = {"u"};
  d.initial = d.final = {"u"};
  for (std::size_t i = 0; i < m->size(); ++i) {
    const auto& n = m->name(Letter::at(i));
    d.push.push_back({"u", n, "u"});
    d.shift.push_back({"u", n, "u"});
  }
  d.pop.push_back({"u", "u", "u"});
  return Opa(std::move(m), d);
}

void require_same_matrix(const Opa& a, const Opa& b) {
  if (!(a.matrix() == b.matrix())) throw OpaError("automata are defined over different precedence matrices");
}

}  // namespace opal
