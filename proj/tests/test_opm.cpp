#include <doctest.h>

#include <cmath>
#include <unordered_set>

#include "fixtures.hpp"
#include "opal/io.hpp"
#include "opal/opm.hpp"
#include "opal/oracle.hpp"

using namespace opal;
using opal::test::data;

namespace {

PrecedenceMatrix cr() { return *load_matrix(data("cr.mat")); }
PrecedenceMatrix arith() { return *load_matrix(data("arith.mat")); }

// Profile read off the relations between consecutive letters of the normal form,
// with the normal form taken from the exhaustive deletion oracle.
Profile profile_by_scan(const PrecedenceMatrix& m, const Word& w) {
  Profile p;
  if (w.empty()) {
    p.left.insert(Letter::eps());
    p.right.insert(Letter::eps());
    return p;
  }
  Word l = *brute_collapse_all_orders(m, w).begin();
  std::size_t n = l.size(), k = 0;  // k: letters up to the last ⋗
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (m.rel(l[i], l[i + 1]) == Prec::Takes) k = i + 1;
  p.first = l.front();
  p.last = l.back();
  p.left.insert(l.front());
  p.left.insert(l[k]);
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (m.rel(l[i], l[i + 1]) == Prec::Takes) p.left.insert(l[i + 1]);
  p.right.insert(l.back());
  for (std::size_t i = k; i + 1 < n; ++i)
    if (m.rel(l[i], l[i + 1]) == Prec::Yields) p.right.insert(l[i]);
  return p;
}

}  // namespace

TEST_CASE("matrix relations and ε conventions") {
  auto m = arith();
  CHECK(m.size() == 6);
  CHECK(m.rel("+", "×") == Prec::Yields);
  CHECK(m.rel("(|", "|)") == Prec::Equals);
  CHECK(m.rel("|)", "+") == Prec::Takes);
  CHECK(m.rel(Letter::eps(), m.letter("1")) == Prec::Yields);
  CHECK(m.rel(m.letter("1"), Letter::eps()) == Prec::Takes);
  CHECK(m.rel(Letter::eps(), Letter::eps()) == Prec::Equals);
  std::size_t declared = 0;
  for (Letter a : m.alphabet())
    for (Letter b : m.alphabet()) declared += m.declared(a, b);
  CHECK(declared == 27);
  CHECK_THROWS_AS(m.rel("+", "2"), MatrixError);
}

TEST_CASE("matrix validation reports every problem") {
  MatrixDraft d;
  d.letters = {"a", "b"};
  d.entries = {{"a", Prec::Yields, "b", 1}, {"a", Prec::Takes, "b", 2}, {"EPS", Prec::Takes, "a", 3},
               {"a", Prec::Equals, "z", 4}};
  auto v = validate_matrix(d);
  auto has = [&](MatrixViolation::Kind k) {
    return std::any_of(v.begin(), v.end(), [&](const MatrixViolation& x) { return x.kind == k; });
  };
  CHECK(has(MatrixViolation::Kind::Conflict));
  CHECK(has(MatrixViolation::Kind::EpsConvention));
  CHECK(has(MatrixViolation::Kind::UnknownLetter));
  CHECK(has(MatrixViolation::Kind::Missing));
  CHECK_THROWS_AS(PrecedenceMatrix::build(d), MatrixError);

  MatrixDraft ok;
  ok.letters = {"a"};
  ok.entries = {{"EPS", Prec::Yields, "a", 1}, {"a", Prec::Takes, "EPS", 2}, {"EPS", Prec::Equals, "EPS", 3}};
  ok.fill = Prec::Equals;
  CHECK(PrecedenceMatrix::build(ok).rel("a", "a") == Prec::Equals);
}

TEST_CASE("matrix parse errors name file and line") {
  try {
    parse_matrix("letters a\nprec a XX a\n", "m.mat");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("m.mat:2:") == 0);
    CHECK(std::string(e.what()).find("LT, EQ or GT") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_matrix("letters a\nprec EPS GT a\n"), ParseError);
  CHECK_THROWS_AS(parse_matrix("prec a LT a\n"), ParseError);
}

TEST_CASE("matrix round trip") {
  for (auto name : {"arith.mat", "cr.mat", "ab.mat"}) {
    auto m = *load_matrix(data(name));
    auto text = format_matrix(m);
    auto back = parse_matrix(text);
    CHECK(back == m);
    CHECK(back.tokens() == m.tokens());
    CHECK(format_matrix(back) == text);
  }
}

TEST_CASE("word syntax") {
  auto m = arith();
  CHECK(m.parse_word("1 × (| 0 + 1 |)").size() == 7);
  CHECK(m.parse_word("").empty());
  CHECK_THROWS_AS(m.parse_word("1 2"), MatrixError);
  auto c = cr();
  CHECK(c.parse_word("ccrr") == Word{Letter::at(0), Letter::at(0), Letter::at(1), Letter::at(1)});
  CHECK(c.format_word(c.parse_word("crr")) == "crr");
  CHECK(c.format_word({}) == "ε");
}

TEST_CASE("chains") {
  auto m = arith();
  auto w = [&](const char* s) { return m.parse_word(s); };
  auto L = [&](const char* s) { return m.letter(s); };
  CHECK(is_chain(m, Letter::eps(), w("1"), Letter::eps()));
  CHECK(is_chain(m, L("+"), w("1"), L("×")));
  CHECK(is_chain(m, L("(|"), w("0 + 1"), L("|)")));
  CHECK(is_chain(m, Letter::eps(), w("1 × (| 0 + 1 |)"), Letter::eps()));
  CHECK_FALSE(is_chain(m, L("(|"), w("|)"), Letter::eps()));
  CHECK_FALSE(is_chain(m, Letter::eps(), {}, Letter::eps()));

  auto c = cr();
  CHECK(is_chain(c, Letter::eps(), c.parse_word("cr"), Letter::eps()));
  CHECK(is_chain(c, c.letter("c"), c.parse_word("cr"), c.letter("r")));
  CHECK_FALSE(is_chain(c, c.letter("c"), c.parse_word("c"), c.letter("r")));
  CHECK(chain_context(c, c.parse_word("c"), c.parse_word("cr"), c.parse_word("r")));
}

TEST_CASE("collapse and structured classes") {
  auto m = cr();
  auto w = [&](const char* s) { return m.parse_word(s); };
  CHECK(collapse(m, w("ccrr")) == w("cr"));
  CHECK(collapse(m, w("crcr")) == w("crcr"));
  CHECK(collapse(m, w("cccrr")) == w("ccr"));
  CHECK(collapse(m, {}) == Word{});
  CHECK(classify(m, {}) == StructuredClass::Both);
  CHECK(classify(m, w("c")) == StructuredClass::Both);
  CHECK(classify(m, w("r")) == StructuredClass::Both);
  CHECK(classify(m, w("ccrr")) == StructuredClass::Both);
  CHECK(classify(m, w("ccr")) == StructuredClass::PushEq);
  CHECK(classify(m, w("crcr")) == StructuredClass::PopEq);
  CHECK(classify(m, w("crcc")) == StructuredClass::Neither);
}

TEST_CASE("profiles") {
  auto m = cr();
  auto p = profile(m, {});
  CHECK(p.first.is_eps());
  CHECK(p.left.contains(Letter::eps()));
  CHECK(p.right.contains(Letter::eps()));
  CHECK(format_profile(m, profile(m, m.parse_word("crcr"))) == "(c, r, {c}, {r})");
  CHECK(format_profile(m, profile(m, m.parse_word("ccr"))) == "(c, r, {c}, {c,r})");
  CHECK(profiles_equal(m, m.parse_word("cr"), m.parse_word("ccrr")));
  CHECK_FALSE(profiles_equal(m, m.parse_word("cr"), {}));
}

TEST_CASE("profile agrees with the relation scan of the normal form") {
  for (auto name : {"cr.mat", "ab.mat", "arith.mat"}) {
    auto m = *load_matrix(data(name));
    std::size_t len = m.size() > 3 ? 5 : 8;
    std::unordered_set<Profile, ProfileHash> seen;
    for (const auto& w : all_words(m.size(), len)) {
      auto p = profile(m, w);
      REQUIRE(p == profile_by_scan(m, w));
      seen.insert(p);
    }
    CHECK(static_cast<double>(seen.size()) <= std::exp2(log2_profile_bound(m.size())) + 1e-9);
  }
}
