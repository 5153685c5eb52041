#include "opal/opm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace opal {

const char* prec_keyword(Prec p) {
  switch (p) {
    case Prec::Yields: return "LT";
    case Prec::Equals: return "EQ";
    case Prec::Takes: return "GT";
  }
  return "?";
}

const char* prec_symbol(Prec p) {
  switch (p) {
    case Prec::Yields: return "⋖";
    case Prec::Equals: return "≐";
    case Prec::Takes: return "⋗";
  }
  return "?";
}

std::optional<Prec> prec_from_keyword(std::string_view s) {
  if (s == "LT") return Prec::Yields;
  if (s == "EQ") return Prec::Equals;
  if (s == "GT") return Prec::Takes;
  return std::nullopt;
}

std::size_t WordHash::operator()(const Word& w) const noexcept {
  std::size_t h = 0xcbf29ce484222325ull;
  for (Letter l : w) {
    h ^= l.index() + 1;
    h *= 0x100000001b3ull;
  }
  return h ^ w.size();
}

bool shortlex_less(const Word& x, const Word& y) {
  if (x.size() != y.size()) return x.size() < y.size();
  return x < y;
}

std::vector<Word> words_of_length(std::size_t sigma, std::size_t n) {
  std::vector<Word> out;
  if (sigma == 0) {
    if (n == 0) out.emplace_back();
    return out;
  }
  Word w(n, Letter::at(0));
  while (true) {
    out.push_back(w);
    std::size_t i = n;
    while (i > 0 && w[i - 1].index() + 1 == sigma) w[--i] = Letter::at(0);
    if (i == 0) break;
    w[i - 1] = Letter::at(w[i - 1].index() + 1);
  }
  return out;
}

std::vector<Word> all_words(std::size_t sigma, std::size_t max_len) {
  std::vector<Word> out;
  for (std::size_t n = 0; n <= max_len; ++n) {
    auto level = words_of_length(sigma, n);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

Word concat(std::initializer_list<std::reference_wrapper<const Word>> parts) {
  Word out;
  for (const Word& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::vector<Letter> LetterSet::letters(std::size_t sigma) const {
  std::vector<Letter> out;
  for (std::size_t i = 0; i < sigma; ++i)
    if (contains(Letter::at(i))) out.push_back(Letter::at(i));
  if (contains(Letter::eps())) out.push_back(Letter::eps());
  return out;
}

namespace {

constexpr std::string_view kEpsName = "EPS";
constexpr std::size_t kMaxLetters = 63;

bool convention_holds(bool left_eps, bool right_eps, Prec p) {
  if (left_eps && right_eps) return p == Prec::Equals;
  if (left_eps) return p == Prec::Yields;
  return p == Prec::Takes;
}

}  // namespace

std::vector<MatrixViolation> validate_matrix(const MatrixDraft& d) {
  using K = MatrixViolation::Kind;
  std::vector<MatrixViolation> out;
  std::map<std::string, std::size_t> index;
  for (const auto& name : d.letters) {
    if (name.empty() || name == kEpsName) {
      out.push_back({K::UnknownLetter, name, "", "reserved or empty letter name '" + name + "'"});
      continue;
    }
    if (!index.emplace(name, index.size()).second)
      out.push_back({K::DuplicateLetter, name, "", "letter '" + name + "' declared twice"});
  }
  if (index.size() > kMaxLetters)
    out.push_back({K::TooManyLetters, "", "", "at most 63 letters are supported"});

  std::map<std::pair<std::size_t, std::size_t>, Prec> seen;
  for (const auto& e : d.entries) {
    bool le = e.left == kEpsName, re = e.right == kEpsName;
    bool bad = false;
    for (const auto* s : {&e.left, &e.right}) {
      if (*s != kEpsName && !index.contains(*s)) {
        out.push_back({K::UnknownLetter, e.left, e.right, "unknown letter '" + *s + "'"});
        bad = true;
      }
    }
    if (bad) continue;
    if (le || re) {
      if (!convention_holds(le, re, e.prec))
        out.push_back({K::EpsConvention, e.left, e.right,
                       "relation " + e.left + " " + prec_keyword(e.prec) + " " + e.right +
                           " contradicts the fixed delimiter convention"});
      continue;
    }
    auto key = std::pair{index.at(e.left), index.at(e.right)};
    auto [it, fresh] = seen.emplace(key, e.prec);
    if (!fresh && it->second != e.prec)
      out.push_back({K::Conflict, e.left, e.right,
                     "conflicting relations " + std::string(prec_keyword(it->second)) + " and " +
                         prec_keyword(e.prec) + " for (" + e.left + ", " + e.right + ")"});
  }

  if (!d.fill) {
    for (const auto& a : d.letters)
      for (const auto& b : d.letters) {
        if (!index.contains(a) || !index.contains(b)) continue;
        if (!seen.contains({index.at(a), index.at(b)}))
          out.push_back({K::Missing, a, b, "no relation for (" + a + ", " + b + ")"});
      }
  }
  return out;
}

PrecedenceMatrix PrecedenceMatrix::build(const MatrixDraft& d) {
  auto violations = validate_matrix(d);
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "invalid precedence matrix:";
    for (const auto& v : violations) msg << "\n  " << v.message;
    throw MatrixError(msg.str());
  }
  PrecedenceMatrix m;
  m.names_ = d.letters;
  m.tokens_ = d.tokens;
  std::size_t n = m.names_.size();
  m.table_.assign(n * n, d.fill.value_or(Prec::Takes));
  m.declared_.assign(n * n, false);
  for (const auto& e : d.entries) {
    if (e.left == kEpsName || e.right == kEpsName) continue;
    std::size_t i = m.letter(e.left).index(), j = m.letter(e.right).index();
    m.table_[i * n + j] = e.prec;
    m.declared_[i * n + j] = true;
  }
  return m;
}

Prec PrecedenceMatrix::rel(Letter a, Letter b) const {
  if (a.is_eps()) return b.is_eps() ? Prec::Equals : Prec::Yields;
  if (b.is_eps()) return Prec::Takes;
  if (a.index() >= size() || b.index() >= size()) throw MatrixError("letter outside the alphabet");
  return table_[a.index() * size() + b.index()];
}

Prec PrecedenceMatrix::rel(std::string_view a, std::string_view b) const {
  return rel(letter(a), letter(b));
}

std::optional<Letter> PrecedenceMatrix::find(std::string_view name) const {
  if (name == kEpsName) return Letter::eps();
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return Letter::at(i);
  return std::nullopt;
}

Letter PrecedenceMatrix::letter(std::string_view name) const {
  if (auto l = find(name)) return *l;
  throw MatrixError("unknown letter '" + std::string(name) + "'");
}

const std::string& PrecedenceMatrix::name(Letter l) const {
  static const std::string eps = "EPS";
  if (l.is_eps()) return eps;
  if (l.index() >= size()) throw MatrixError("letter outside the alphabet");
  return names_[l.index()];
}

std::vector<Letter> PrecedenceMatrix::alphabet() const {
  std::vector<Letter> out;
  for (std::size_t i = 0; i < size(); ++i) out.push_back(Letter::at(i));
  return out;
}

Word PrecedenceMatrix::parse_word(std::string_view text) const {
  Word w;
  auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  std::size_t i = 0;
  while (i < text.size()) {
    if (is_space(text[i])) {
      ++i;
      continue;
    }
    if (tokens_ == TokenMode::Spaced) {
      std::size_t j = i;
      while (j < text.size() && !is_space(text[j])) ++j;
      auto tok = text.substr(i, j - i);
      auto l = find(tok);
      if (!l || l->is_eps()) throw MatrixError("unknown letter '" + std::string(tok) + "' in word");
      w.push_back(*l);
      i = j;
      continue;
    }
    // Longest declared symbol that is a prefix of the remaining text.
    std::size_t best = names_.size(), best_len = 0;
    for (std::size_t k = 0; k < names_.size(); ++k) {
      const auto& nm = names_[k];
      if (nm.size() > best_len && text.substr(i, nm.size()) == nm) {
        best = k;
        best_len = nm.size();
      }
    }
    if (best == names_.size()) {
      std::size_t j = i + 1;
      while (j < text.size() && (static_cast<unsigned char>(text[j]) & 0xC0) == 0x80) ++j;
      throw MatrixError("unknown letter '" + std::string(text.substr(i, j - i)) + "' in word");
    }
    w.push_back(Letter::at(best));
    i += best_len;
  }
  return w;
}

std::string PrecedenceMatrix::format_word(const Word& w, std::string_view empty) const {
  if (w.empty()) return std::string(empty);
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i > 0 && tokens_ == TokenMode::Spaced) out += ' ';
    out += name(w[i]);
  }
  return out;
}

std::string PrecedenceMatrix::format_letter(Letter l) const { return l.is_eps() ? "ε" : name(l); }

bool is_chain(const PrecedenceMatrix& m, Letter a0, std::span<const Letter> y, Letter a1) {
  if (y.empty()) return false;
  std::vector<Letter> stack{a0};
  for (Letter x : y) {
    while (stack.size() > 1 && m.rel(stack.back(), x) == Prec::Takes) stack.pop_back();
    Prec p = m.rel(stack.back(), x);
    if (stack.size() == 1) {
      if (p != Prec::Yields) return false;  // the left context may never be reduced
      stack.push_back(x);
    } else if (p == Prec::Yields) {
      stack.push_back(x);
    } else {
      stack.back() = x;
    }
  }
  while (stack.size() > 1 && m.rel(stack.back(), a1) == Prec::Takes) stack.pop_back();
  return stack.size() == 1;
}

bool chain_context(const PrecedenceMatrix& m, const Word& x, const Word& y, const Word& z) {
  return is_chain(m, last_letter(x), y, first_letter(z));
}

Word CollapsedForm::flat() const {
  Word out;
  for (const auto& g : closed) out.insert(out.end(), g.begin(), g.end());
  for (const auto& g : open) out.insert(out.end(), g.begin(), g.end());
  return out;
}

CollapsedForm collapsed_form(const PrecedenceMatrix& m, std::span<const Letter> w) {
  CollapsedForm f;
  for (Letter x : w) {
    while (!f.open.empty() && m.rel(f.open.back().back(), x) == Prec::Takes) {
      Word g = std::move(f.open.back());
      f.open.pop_back();
      // A group reduced above another group is an inner chain and vanishes.
      if (f.open.empty()) f.closed.push_back(std::move(g));
    }
    if (!f.open.empty() && m.rel(f.open.back().back(), x) == Prec::Equals)
      f.open.back().push_back(x);
    else
      f.open.push_back(Word{x});
  }
  return f;
}

Word collapse(const PrecedenceMatrix& m, std::span<const Letter> w) { return collapsed_form(m, w).flat(); }

std::size_t ProfileHash::operator()(const Profile& p) const noexcept {
  std::size_t h = p.first.index() * 257 + p.last.index();
  h = h * 0x9e3779b97f4a7c15ull ^ p.left.raw();
  h = h * 0x9e3779b97f4a7c15ull ^ p.right.raw();
  return h;
}

Profile profile(const PrecedenceMatrix& m, std::span<const Letter> w) {
  Profile p;
  if (w.empty()) {
    p.left.insert(Letter::eps());
    p.right.insert(Letter::eps());
    return p;
  }
  p.first = w.front();
  p.last = w.back();
  auto f = collapsed_form(m, w);
  for (const auto& g : f.closed) p.left.insert(g.front());
  p.left.insert(f.open.front().front());
  for (const auto& g : f.open) p.right.insert(g.back());
  return p;
}

bool profiles_equal(const PrecedenceMatrix& m, const Word& x, const Word& y) {
  return profile(m, x) == profile(m, y);
}

std::string format_profile(const PrecedenceMatrix& m, const Profile& p) {
  auto set = [&](LetterSet s) {
    std::string out = "{";
    bool first = true;
    for (Letter l : s.letters(m.size())) {
      if (!first) out += ",";
      out += m.format_letter(l);
      first = false;
    }
    return out + "}";
  };
  return "(" + m.format_letter(p.first) + ", " + m.format_letter(p.last) + ", " + set(p.left) + ", " +
         set(p.right) + ")";
}

StructuredClass classify(const PrecedenceMatrix& m, std::span<const Letter> w) {
  auto f = collapsed_form(m, w);
  bool push = f.closed.empty();
  bool pop = f.open.size() <= 1;
  if (push && pop) return StructuredClass::Both;
  if (push) return StructuredClass::PushEq;
  if (pop) return StructuredClass::PopEq;
  return StructuredClass::Neither;
}

bool in_pusheq(const PrecedenceMatrix& m, std::span<const Letter> w) {
  auto c = classify(m, w);
  return c == StructuredClass::PushEq || c == StructuredClass::Both;
}

bool in_popeq(const PrecedenceMatrix& m, std::span<const Letter> w) {
  auto c = classify(m, w);
  return c == StructuredClass::PopEq || c == StructuredClass::Both;
}

double log2_profile_bound(std::size_t sigma) {
  if (sigma == 0) return 0.0;
  double s = static_cast<double>(sigma);
  return std::log2(s * s * std::exp2(2 * s - 2) + 1);
}

}  // namespace opal
