#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "opal/opm.hpp"

namespace opal {

class GrammarError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Rule {
  std::string lhs;
  std::vector<std::string> rhs;  // empty for an ε-rule
};

class Grammar {
 public:
  Grammar(std::string start, std::vector<Rule> rules, std::set<std::string> extra_nonterminals = {});

  const std::string& start() const { return start_; }
  const std::vector<Rule>& rules() const { return rules_; }
  const std::set<std::string>& nonterminals() const { return nonterminals_; }
  // Terminals in order of first appearance.
  const std::vector<std::string>& terminals() const { return terminals_; }
  bool is_terminal(const std::string& s) const { return !nonterminals_.contains(s); }
  bool nullable(const std::string& nt) const { return nullable_.contains(nt); }

 private:
  std::string start_;
  std::vector<Rule> rules_;
  std::set<std::string> nonterminals_;
  std::vector<std::string> terminals_;
  std::set<std::string> nullable_;
};

using TerminalSets = std::map<std::string, std::set<std::string>>;

// a ∈ L(A) iff A ⇒* B a α with B a nonterminal or nothing; R is the mirror image.
TerminalSets left_terminals(const Grammar& g);
TerminalSets right_terminals(const Grammar& g);

struct RelationTriple {
  std::string left;
  Prec prec;
  std::string right;
  std::set<std::size_t> witnesses;  // indices into Grammar::rules()
};

// Sorted by (left, right, prec) in terminal order.
std::vector<RelationTriple> extract_relations(const Grammar& g);
// Relations contributed by a single rule, given the grammar-wide terminal sets.
std::vector<RelationTriple> rule_relations(const Grammar& g, std::size_t rule, const TerminalSets& l,
                                           const TerminalSets& r);

struct Conflict {
  std::string left, right;
  std::vector<RelationTriple> relations;  // at least two, with different precedences
};

struct OpgCheck {
  std::vector<Conflict> conflicts;
  bool ok() const { return conflicts.empty(); }
};

OpgCheck is_opg(const Grammar& g);

// Builds a matrix draft from a conflict-free grammar. Undefined cells are left to `fill`.
MatrixDraft grammar_matrix(const Grammar& g, std::optional<Prec> fill = Prec::Takes);

}  // namespace opal
