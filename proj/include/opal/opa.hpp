#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "opal/opm.hpp"

namespace opal {

using State = std::uint16_t;
// State sets are bitmasks; automata are limited to 64 states.
using StateSet = std::uint64_t;
constexpr std::size_t kMaxStates = 64;

inline StateSet state_bit(State q) { return StateSet{1} << q; }

class OpaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Stack symbol ⟨a, q⟩: the letter on top of the symbol and the state stored by the push.
struct StackSymbol {
  Letter letter;
  State state = 0;
  friend bool operator==(StackSymbol, StackSymbol) = default;
  friend auto operator<=>(StackSymbol, StackSymbol) = default;
};

enum class OpKind { Push, Shift, Pop };

// Edge lists before validation, as written in a file or built in code.
struct OpaDraft {
  struct Edge {
    std::string from;
    std::string label;  // letter for push/shift, stored state for pop
    std::string to;
    std::size_t line = 0;
  };
  std::vector<std::string> states;
  std::vector<std::string> initial, final;
  std::vector<Edge> push, shift, pop;
};

class Opa {
 public:
  // Throws OpaError when an edge or set mentions an undeclared state or letter.
  Opa(std::shared_ptr<const PrecedenceMatrix> m, const OpaDraft& d);
  Opa(std::shared_ptr<const PrecedenceMatrix> m, std::size_t states);

  const PrecedenceMatrix& matrix() const { return *matrix_; }
  std::shared_ptr<const PrecedenceMatrix> matrix_ptr() const { return matrix_; }
  std::size_t num_states() const { return names_.size(); }
  const std::string& state_name(State q) const { return names_.at(q); }
  std::optional<State> find_state(std::string_view name) const;

  StateSet initial() const { return initial_; }
  StateSet final() const { return final_; }
  bool is_initial(State q) const { return (initial_ & state_bit(q)) != 0; }
  bool is_final(State q) const { return (final_ & state_bit(q)) != 0; }
  void set_initial(State q) { initial_ |= state_bit(q); }
  void set_final(State q) { final_ |= state_bit(q); }

  void add_push(State q, Letter a, State to);
  void add_shift(State q, Letter a, State to);
  void add_pop(State q, State stored, State to);

  StateSet push(State q, Letter a) const { return push_[q * sigma() + a.index()]; }
  StateSet shift(State q, Letter a) const { return shift_[q * sigma() + a.index()]; }
  StateSet pop(State q, State stored) const { return pop_[q * num_states() + stored]; }

  std::size_t edge_count() const;
  bool is_deterministic() const;

 private:
  std::size_t sigma() const { return matrix_->size(); }
  void check_state(State q) const;

  std::shared_ptr<const PrecedenceMatrix> matrix_;
  std::vector<std::string> names_;
  StateSet initial_ = 0, final_ = 0;
  std::vector<StateSet> push_, shift_, pop_;
};

// Which move the machine makes with top-of-stack letter `top` (ε for ⊥) and lookahead `next`.
OpKind op_kind(const PrecedenceMatrix& m, Letter top, Letter next);

// A configuration: current state, unread input and stack (bottom first, top last).
struct Configuration {
  State state = 0;
  Word input;
  std::vector<StackSymbol> stack;
  friend bool operator==(const Configuration&, const Configuration&) = default;
};

std::vector<Configuration> successors(const Opa& a, const Configuration& c);

bool accepts(const Opa& a, const Word& w);
// An accepting run, one configuration per row, or nullopt if w is rejected.
std::optional<std::vector<Configuration>> run_trace(const Opa& a, const Word& w);

std::string format_stack(const Opa& a, const std::vector<StackSymbol>& stack);

// The single-state automaton accepting every word over the matrix alphabet.
Opa universal_opa(std::shared_ptr<const PrecedenceMatrix> m);

// Automata over a common alphabet must agree on the precedence matrix.
void require_same_matrix(const Opa& a, const Opa& b);

// Set of runs sharing one input prefix. All runs over the same input from the same
// initial stack letters carry the same stack letters, only the stored states differ,
// so the letters are kept once.
class RunSet {
 public:
  struct Thread {
    State state;
    std::vector<State> stored;  // parallel to letters()
    friend bool operator==(const Thread&, const Thread&) = default;
    friend auto operator<=>(const Thread&, const Thread&) = default;
  };

  RunSet() = default;
  // Runs starting in any state of `states` with an empty stack.
  static RunSet start(StateSet states);
  // Runs starting in `q` with a single stack symbol (⊥ when base is nullopt).
  static RunSet start(State q, std::optional<StackSymbol> base);

  // Reduce with lookahead `next` and then read it. Returns false if every run dies.
  bool step(const Opa& a, Letter next);
  // Pops triggered by lookahead `next` with the given minimum stack height kept.
  void reduce(const Opa& a, Letter next, std::size_t keep = 0);
  // Reduce fully at end of input and report whether a final state is reached on ⊥.
  bool accepting(const Opa& a) const;

  const std::vector<Letter>& letters() const { return letters_; }
  const std::vector<Thread>& threads() const { return threads_; }
  bool empty() const { return threads_.empty(); }
  // True if the forced moves for `next` would reduce below height `keep`.
  bool reduces_below(const PrecedenceMatrix& m, Letter next, std::size_t keep) const;

 private:
  void normalize();
  std::vector<Letter> letters_;
  std::vector<Thread> threads_;
};

// The same run set in factored form. Stack level i (1-based) relates the state
// stored at level i to the state stored at level i+1, or to the current state at
// the top; level 0 lists the states stored at level 1 (the current states when the
// stack is empty). Run segments between two pushes only share their boundary
// states, so a run set is exactly the set of paths through these relations and
// the size stays polynomial where RunSet may grow exponentially.
class RunGraph {
 public:
  RunGraph() = default;
  static RunGraph start(const Opa& a, StateSet states);
  static RunGraph start(const Opa& a, State q, std::optional<StackSymbol> base);

  bool step(const Opa& a, Letter next);
  void reduce(const Opa& a, Letter next, std::size_t keep = 0);
  bool accepting(const Opa& a) const;
  bool reduces_below(const PrecedenceMatrix& m, Letter next, std::size_t keep) const;

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t height() const { return letters_.size(); }
  bool empty() const { return current() == 0; }
  StateSet current() const;
  // rel(0)[0] is the root set; rel(i)[s] for 1 ≤ i ≤ height().
  const std::vector<StateSet>& rel(std::size_t i) const { return rel_[i]; }
  // States stored at level i (1-based) on some complete run.
  StateSet stored_at(std::size_t i) const;
  // Expanded threads, for cross-checking against RunSet.
  std::vector<RunSet::Thread> threads() const;

 private:
  void trim();
  std::size_t states_ = 0;
  std::vector<Letter> letters_;
  std::vector<std::vector<StateSet>> rel_{std::vector<StateSet>(1, 0)};
};

}  // namespace opal
