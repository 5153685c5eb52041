#pragma once

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "opal/congruence.hpp"
#include "opal/opa.hpp"

namespace opal {

// Cell (s, t, a, b, c): runs from s to t over a word u, starting on a single stack
// symbol with letter a (⊥ for ε), ending on one with letter b, lookahead c.
struct Cell {
  State s = 0, t = 0;
  Letter a, b, c;
  friend bool operator==(const Cell&, const Cell&) = default;
};

class CellSpace {
 public:
  CellSpace(std::size_t states, std::size_t sigma) : states_(states), sigma_(sigma) {}
  std::size_t size() const { return states_ * states_ * l() * l() * l(); }
  std::size_t index(const Cell& x) const {
    return (((x.s * states_ + x.t) * l() + x.a.code(sigma_)) * l() + x.b.code(sigma_)) * l() + x.c.code(sigma_);
  }
  Cell cell(std::size_t i) const;
  std::size_t states() const { return states_; }
  std::size_t sigma() const { return sigma_; }

 private:
  std::size_t l() const { return sigma_ + 1; }
  std::size_t states_, sigma_;
};

enum class OrderKind {
  Structural,  // ≤ on signatures of the right-hand automaton
  Summary,     // run summaries of the right-hand automaton, finer than Structural
  Profile,     // profile equality, no automaton needed
};

const char* order_name(OrderKind k);

struct WordKey {
  Profile profile;
  Signature sig;
  RunSummary summary;
};

// Quasi-order on words used for subsumption. Keys are computed once per word.
// The profile order only uses the automaton for its matrix.
class WordOrder {
 public:
  WordOrder(OrderKind kind, const Opa* automaton);
  OrderKind kind() const { return kind_; }
  WordKey key(const Word& w) const;
  bool leq(const WordKey& x, const WordKey& y) const;
  bool leq(const Word& x, const Word& y) const { return leq(key(x), key(y)); }

 private:
  OrderKind kind_;
  const Opa* automaton_;
};

struct Entry {
  Word word;
  WordKey key;
};

class CatVector {
 public:
  // The base vector: ε in every cell with a = b and s = t.
  static CatVector base(const Opa& a, const WordOrder& order);
  static CatVector empty_like(const CatVector& x);

  const CellSpace& space() const { return space_; }
  const std::vector<Entry>& operator[](std::size_t i) const { return cells_[i]; }
  std::vector<Entry>& operator[](std::size_t i) { return cells_[i]; }
  const std::vector<Entry>& at(const Cell& c) const { return cells_[space_.index(c)]; }
  bool contains(const Cell& c, const Word& w) const;
  std::size_t total_words() const;
  std::size_t nonempty_cells() const;
  std::size_t max_cell() const;
  // Words already found dominated in cell i. Domination survives pruning, since a
  // stored word is only dropped for one below it, so these need no new key.
  const std::unordered_set<Word, WordHash>& settled(std::size_t i) const { return settled_[i]; }
  std::unordered_set<Word, WordHash>& settled(std::size_t i) { return settled_[i]; }

 private:
  explicit CatVector(CellSpace s) : space_(s), cells_(s.size()), settled_(s.size()) {}
  CellSpace space_;
  std::vector<std::vector<Entry>> cells_;
  std::vector<std::unordered_set<Word, WordHash>> settled_;
};

// Candidate words for one cell, sorted shortlex, without duplicates.
std::vector<Word> cat_shift(const Opa& a, const CatVector& x, const Cell& cell);
std::vector<Word> cat_chain(const Opa& a, const CatVector& x, const Cell& cell);

struct StepOptions {
  bool prune = true;
  std::size_t max_len = SIZE_MAX;  // candidates longer than this are dropped
};

struct StepStats {
  std::size_t candidates = 0;  // distinct new candidates over all cells
  std::size_t inserted = 0;
  std::size_t pruned = 0;      // candidates discarded plus stored words removed
  std::size_t total_words = 0;
  std::size_t nonempty_cells = 0;
  std::size_t max_cell = 0;
};

struct StepResult {
  CatVector next;
  bool stable = false;  // every candidate was dominated by a word of the input vector
  StepStats stats;
};

// One application of Cat, cells processed concurrently against the input vector.
StepResult cat_step(const Opa& a, const CatVector& x, const WordOrder& order, const StepOptions& opt = {});

namespace reference {
StepResult cat_step_serial(const Opa& a, const CatVector& x, const WordOrder& order, const StepOptions& opt = {});
}

// B(X ⪯ Y): X ⊆ Y and every word of Y is dominated by one of X.
bool basis_check(const std::vector<Word>& x, const std::vector<Word>& y, const WordOrder& order);

struct InclusionOptions {
  bool prune = true;
  OrderKind order = OrderKind::Summary;
  bool parallel = true;
  std::size_t max_iterations = 0;  // 0 means no limit
  // Stop at the first iteration whose final cells hold a rejected word. Unset means
  // only when pruning, so the unpruned loop runs to its fixpoint before harvesting.
  std::optional<bool> stop_at_witness;
};

struct InclusionResult {
  bool holds = true;  // inclusion holds, or the language is empty for emptiness
  std::optional<Word> witness;
  State initial = 0, final = 0;  // the failing pair when a witness exists
  std::vector<StepStats> iterations;
  std::size_t final_words = 0;  // words stored in (qI, qF, ε, ε, ε) cells at the end
};

// L(a) ⊆ L(b) by the antichain fixpoint over a's cells, subsumption w.r.t. b.
InclusionResult include(const Opa& a, const Opa& b, const InclusionOptions& opt = {});
InclusionResult universality(const Opa& b, const InclusionOptions& opt = {});
// holds means L(a) is empty; otherwise witness is an accepted word.
InclusionResult emptiness(const Opa& a, const InclusionOptions& opt = {});

}  // namespace opal
