#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "opal/antichain.hpp"
#include "opal/opa.hpp"
#include "opal/opm.hpp"

namespace opal {

class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Length caps for exhaustive enumeration. OPAL_BUDGET replaces the default cap,
// but nothing beyond the hard limit is ever enumerated.
struct WordBudget {
  static constexpr std::size_t kDefaultCap = 10;
  static constexpr std::size_t kHardLimit = 12;
  static std::size_t cap();  // reads OPAL_BUDGET
  // Throws BudgetError when `max_len` exceeds the cap.
  static void check(std::size_t max_len);
};

// Chain predicate by direct recursive decomposition into a simple chain with
// nested sub-chains.
bool brute_chain(const PrecedenceMatrix& m, Letter a0, const Word& y, Letter a1);

// All results of repeatedly deleting inner chains x[y]z (x, z nonempty) until none is left.
std::set<Word> brute_collapse_all_orders(const PrecedenceMatrix& m, const Word& w);

// Shortlex-least w of length ≤ max_len with w ∈ L(a) \ L(b).
std::optional<Word> brute_include(const Opa& a, const Opa& b, std::size_t max_len);

// Words of length exactly n per cell, by direct simulation: start on one stack symbol
// with letter a (none for ε) that is never reduced, read u, reduce with lookahead c
// down to that symbol, and end in t with its letter equal to b.
// Cells whose brute-force semantics holds for u, in index order. No length cap.
std::vector<std::size_t> brute_cells_of(const Opa& a, const Word& u);
bool brute_in_cell(const Opa& a, const Cell& cell, const Word& u);
using CellWords = std::map<std::size_t, std::set<Word>>;
CellWords brute_cat_all(const Opa& a, std::size_t n);
std::set<Word> brute_cat_cell(const Opa& a, const Cell& cell, std::size_t n);

}  // namespace opal
