#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "opal/opa.hpp"
#include "opal/opm.hpp"

namespace opal {

// Dense numbering of starting stacks Γ ∪ {⊥}: 0 is ⊥, then ⟨a,q⟩ in letter-major order.
class TopIndex {
 public:
  TopIndex(std::size_t sigma, std::size_t states) : sigma_(sigma), states_(states) {}
  std::size_t size() const { return 1 + sigma_ * states_; }
  std::size_t of(const std::optional<StackSymbol>& s) const {
    return s ? 1 + s->letter.index() * states_ + s->state : 0;
  }
  std::optional<StackSymbol> symbol(std::size_t i) const {
    if (i == 0) return std::nullopt;
    --i;
    return StackSymbol{Letter::at(i / states_), static_cast<State>(i % states_)};
  }

 private:
  std::size_t sigma_, states_;
};

// Behaviour of an automaton on a word w, read up to (not including) an appended
// letter that every letter yields to, so no reductions happen at the end of w.
//   f(q,γ)     states reached from q with stack γ
//   g(q1,q2,γ) states reached from q2 by popping all of a stack reached from (q1,γ)
//   phi(q,γ)   tops of the stacks reached from (q,γ)
struct Signature {
  Profile profile;
  std::size_t states = 0, tops = 0, top_words = 0;
  std::vector<StateSet> f;           // [q * tops + γ]
  std::vector<StateSet> g;           // [(q1 * states + q2) * tops + γ]
  std::vector<std::uint64_t> phi;    // bit rows of `top_words` words, row q * tops + γ

  StateSet f_at(State q, std::size_t top) const { return f[q * tops + top]; }
  StateSet g_at(State q1, State q2, std::size_t top) const { return g[(q1 * states + q2) * tops + top]; }
  bool phi_has(State q, std::size_t top, std::size_t t) const {
    return (phi[(q * tops + top) * top_words + t / 64] >> (t % 64)) & 1;
  }
  friend bool operator==(const Signature&, const Signature&) = default;
};

struct SignatureHash {
  std::size_t operator()(const Signature& s) const noexcept;
};

Signature signature(const Opa& a, const Word& w);

// x ≤ y: equal profiles and f, g and phi included pointwise.
bool leq_struct(const Signature& x, const Signature& y);
bool equiv_struct(const Signature& x, const Signature& y);

// Finer abstraction that keeps each reached state together with the stack it was
// reached with: for every start (q,γ) the set of triples (state, top, drain), where
// drain maps a state to the states reachable by popping the whole stack.
struct RunSummary {
  struct Item {
    State state;
    std::uint32_t top;
    std::vector<StateSet> drain;
    friend bool operator==(const Item&, const Item&) = default;
    friend auto operator<=>(const Item&, const Item&) = default;
  };
  Profile profile;
  std::vector<std::vector<Item>> items;  // per start q * tops + γ, sorted
  friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

RunSummary run_summary(const Opa& a, const Word& w);
bool leq_summary(const RunSummary& x, const RunSummary& y);

std::string format_signature(const Opa& a, const Signature& s, bool machine);

struct ClassRep {
  Word word;  // shortlex-least member found
  Signature sig;
  std::size_t members = 0;
};

struct ClassEnumeration {
  std::vector<ClassRep> classes;  // in order of discovery, i.e. shortlex order of representatives
  std::size_t profiles = 0;
  std::size_t words = 0;
};

// Classes of ≡ among all words of length ≤ max_len. Signatures of one length are
// computed in parallel; grouping is sequential in shortlex order.
ClassEnumeration enumerate_classes(const Opa& a, std::size_t max_len);

namespace reference {
ClassEnumeration enumerate_classes_serial(const Opa& a, std::size_t max_len);
}

// log2 of the bound |Σ|²·2^(2|Σ|) · (2^|Q|)^(|Q|(|Γ|+1)) · (2^|Q|)^(|Q|²(|Γ|+1)) · (2^(|Γ|+1))^(|Q|(|Γ|+1)).
double log2_class_bound(std::size_t sigma, std::size_t states);

// A context (u, u0, v0, v) wrapping a word x as u·u0·x·v0·v.
struct Context {
  Word u, u0, v0, v;
  friend bool operator==(const Context&, const Context&) = default;
};

// True if the context qualifies for x: u0·first(x) only reduces, last(x)·v0 never
// reduces, and u0·x·v0 is a chain between last(u) and first(v).
bool context_qualifies(const PrecedenceMatrix& m, const Context& c, const Word& x);

// All contexts with |u|+|u0|+|v0|+|v| ≤ max_total, by total length, then lexicographically.
std::vector<Context> enumerate_contexts(const PrecedenceMatrix& m, std::size_t max_total);

struct Refutation {
  enum class Kind { Refuted, NoRefutation };
  enum class Reason { None, ProfileMismatch, Membership };
  Kind kind = Kind::NoRefutation;
  Reason reason = Reason::None;
  std::optional<Context> context;
  std::size_t tried = 0;  // qualifying contexts examined
};

Refutation refute_syntactic_equiv(const std::function<bool(const Word&)>& member, const PrecedenceMatrix& m,
                                  const Word& x, const Word& y, const std::vector<Context>& contexts);

}  // namespace opal
