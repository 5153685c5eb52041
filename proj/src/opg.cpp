#include "opal/opg.hpp"

#include <algorithm>

namespace opal {

Grammar::Grammar(std::string start, std::vector<Rule> rules, std::set<std::string> extra_nonterminals)
    : start_(std::move(start)), rules_(std::move(rules)), nonterminals_(std::move(extra_nonterminals)) {
  if (start_.empty()) throw GrammarError("grammar has no start symbol");
  nonterminals_.insert(start_);
  for (const auto& r : rules_) nonterminals_.insert(r.lhs);
  std::set<std::string> seen;
  for (const auto& r : rules_)
    for (const auto& s : r.rhs)
      if (s.empty())
        throw GrammarError("empty symbol in rule for " + r.lhs);
      else if (is_terminal(s) && seen.insert(s).second)
        terminals_.push_back(s);

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : rules_) {
      if (nullable_.contains(r.lhs)) continue;
      if (std::all_of(r.rhs.begin(), r.rhs.end(), [&](const std::string& s) { return nullable_.contains(s); })) {
        nullable_.insert(r.lhs);
        changed = true;
      }
    }
  }
}

namespace {

// L0(A): terminals a with A ⇒* a α. L1(A): terminals a with A ⇒* B a α, B ∈ V ∪ {ε}.
TerminalSets leading(const Grammar& g, bool mirror) {
  auto body = [&](const Rule& r) {
    auto rhs = r.rhs;
    if (mirror) std::reverse(rhs.begin(), rhs.end());
    return rhs;
  };
  TerminalSets l0, l1;
  for (const auto& nt : g.nonterminals()) l0[nt], l1[nt];

  auto grow = [](std::set<std::string>& into, const std::set<std::string>& from) {
    std::size_t before = into.size();
    into.insert(from.begin(), from.end());
    return into.size() != before;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : g.rules()) {
      auto rhs = body(r);
      for (const auto& x : rhs) {
        if (g.is_terminal(x)) {
          changed |= l0[r.lhs].insert(x).second;
          break;
        }
        changed |= grow(l0[r.lhs], l0[x]);
        if (!g.nullable(x)) break;
      }
    }
  }

  changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : g.rules()) {
      auto rhs = body(r);
      // The prefix scanned so far must derive at most one nonterminal.
      std::size_t solid = 0;
      for (const auto& x : rhs) {
        if (g.is_terminal(x)) {
          changed |= l1[r.lhs].insert(x).second;
          break;
        }
        changed |= grow(l1[r.lhs], solid == 0 ? l1[x] : l0[x]);
        if (!g.nullable(x)) ++solid;
        if (solid > 1) break;
      }
    }
  }
  return l1;
}

std::size_t terminal_rank(const Grammar& g, const std::string& t) {
  const auto& ts = g.terminals();
  return static_cast<std::size_t>(std::find(ts.begin(), ts.end(), t) - ts.begin());
}

}  // namespace

TerminalSets left_terminals(const Grammar& g) { return leading(g, false); }
TerminalSets right_terminals(const Grammar& g) { return leading(g, true); }

std::vector<RelationTriple> rule_relations(const Grammar& g, std::size_t index, const TerminalSets& l,
                                           const TerminalSets& r) {
  std::vector<RelationTriple> out;
  const auto& rhs = g.rules().at(index).rhs;
  auto add = [&](const std::string& a, Prec p, const std::string& b) { out.push_back({a, p, b, {index}}); };
  for (std::size_t i = 0; i + 1 < rhs.size(); ++i) {
    const auto &x = rhs[i], &y = rhs[i + 1];
    bool tx = g.is_terminal(x), ty = g.is_terminal(y);
    if (tx && ty) add(x, Prec::Equals, y);
    if (tx && !ty) {
      for (const auto& b : l.at(y)) add(x, Prec::Yields, b);
      if (i + 2 < rhs.size() && g.is_terminal(rhs[i + 2])) add(x, Prec::Equals, rhs[i + 2]);
    }
    if (!tx && ty)
      for (const auto& a : r.at(x)) add(a, Prec::Takes, y);
  }
  return out;
}

std::vector<RelationTriple> extract_relations(const Grammar& g) {
  auto l = left_terminals(g);
  auto r = right_terminals(g);
  std::map<std::tuple<std::size_t, std::size_t, Prec>, RelationTriple> merged;
  for (std::size_t i = 0; i < g.rules().size(); ++i) {
    for (auto& t : rule_relations(g, i, l, r)) {
      auto key = std::tuple{terminal_rank(g, t.left), terminal_rank(g, t.right), t.prec};
      auto [it, fresh] = merged.emplace(key, t);
      if (!fresh) it->second.witnesses.insert(t.witnesses.begin(), t.witnesses.end());
    }
  }
  std::vector<RelationTriple> out;
  for (auto& [k, t] : merged) out.push_back(std::move(t));
  return out;
}

OpgCheck is_opg(const Grammar& g) {
  OpgCheck check;
  auto rels = extract_relations(g);
  for (std::size_t i = 0; i < rels.size();) {
    std::size_t j = i;
    while (j < rels.size() && rels[j].left == rels[i].left && rels[j].right == rels[i].right) ++j;
    if (j - i > 1) check.conflicts.push_back({rels[i].left, rels[i].right, {rels.begin() + i, rels.begin() + j}});
    i = j;
  }
  return check;
}

MatrixDraft grammar_matrix(const Grammar& g, std::optional<Prec> fill) {
  auto check = is_opg(g);
  if (!check.ok()) {
    const auto& c = check.conflicts.front();
    throw GrammarError("grammar is not an operator precedence grammar: conflict on (" + c.left + ", " + c.right +
                       ")");
  }
  MatrixDraft d;
  d.letters = g.terminals();
  bool single = std::all_of(d.letters.begin(), d.letters.end(), [](const std::string& s) {
    // One code point, possibly multi-byte.
    std::size_t n = 0;
    for (unsigned char c : s) n += (c & 0xC0) != 0x80;
    return n == 1;
  });
  d.tokens = single ? TokenMode::Chars : TokenMode::Spaced;
  for (const auto& t : extract_relations(g)) d.entries.push_back({t.left, t.prec, t.right, 0});
  if (d.entries.size() < d.letters.size() * d.letters.size()) d.fill = fill;
  return d;
}

}  // namespace opal
