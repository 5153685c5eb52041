#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace opal {

// Precedence relations: yields (⋖), equal-in-precedence (≐), takes (⋗).
enum class Prec : std::uint8_t { Yields, Equals, Takes };

const char* prec_keyword(Prec p);  // "LT", "EQ", "GT"
const char* prec_symbol(Prec p);   // "⋖", "≐", "⋗"
std::optional<Prec> prec_from_keyword(std::string_view s);

// A letter of Σ or the delimiter ε. Letters are indices into the matrix alphabet.
class Letter {
 public:
  static constexpr std::uint8_t kEps = 0xFF;

  constexpr Letter() = default;
  static constexpr Letter eps() { return Letter{}; }
  static constexpr Letter at(std::size_t i) {
    Letter l;
    l.v_ = static_cast<std::uint8_t>(i);
    return l;
  }

  constexpr bool is_eps() const { return v_ == kEps; }
  constexpr std::size_t index() const { return v_; }
  // Dense code in [0, |Σ|]: letters keep their index, ε maps to |Σ|.
  constexpr std::size_t code(std::size_t sigma) const { return is_eps() ? sigma : v_; }

  friend constexpr bool operator==(Letter, Letter) = default;
  friend constexpr auto operator<=>(Letter, Letter) = default;

 private:
  std::uint8_t v_ = kEps;
};

using Word = std::vector<Letter>;

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept;
};

// Length first, then lexicographic by alphabet order.
bool shortlex_less(const Word& x, const Word& y);

// Words over the first `sigma` letters: of length exactly n, lexicographic; of length ≤ max_len, shortlex.
std::vector<Word> words_of_length(std::size_t sigma, std::size_t n);
std::vector<Word> all_words(std::size_t sigma, std::size_t max_len);

Word concat(std::initializer_list<std::reference_wrapper<const Word>> parts);

// Set of letters including ε. Alphabets are capped at 63 letters so one word suffices.
class LetterSet {
 public:
  void insert(Letter l) { bits_ |= bit(l); }
  bool contains(Letter l) const { return (bits_ & bit(l)) != 0; }
  bool empty() const { return bits_ == 0; }
  std::uint64_t raw() const { return bits_; }
  std::vector<Letter> letters(std::size_t sigma) const;
  friend bool operator==(LetterSet, LetterSet) = default;

 private:
  static std::uint64_t bit(Letter l) { return std::uint64_t{1} << (l.is_eps() ? 63 : l.index()); }
  std::uint64_t bits_ = 0;
};

enum class TokenMode { Chars, Spaced };

class MatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MatrixViolation {
  enum class Kind { UnknownLetter, DuplicateLetter, Conflict, Missing, EpsConvention, TooManyLetters };
  Kind kind;
  std::string left, right;
  std::string message;
};

// Unvalidated matrix content as declared by a user or parsed from a file.
struct MatrixDraft {
  struct Entry {
    std::string left;  // "EPS" denotes ε
    Prec prec;
    std::string right;
    std::size_t line = 0;
  };
  std::vector<std::string> letters;
  std::vector<Entry> entries;
  std::optional<Prec> fill;
  TokenMode tokens = TokenMode::Chars;
};

std::vector<MatrixViolation> validate_matrix(const MatrixDraft& d);

// A total precedence matrix over Σ, with the fixed ε conventions ε⋖a, a⋗ε, ε≐ε.
class PrecedenceMatrix {
 public:
  // Throws MatrixError listing every violation.
  static PrecedenceMatrix build(const MatrixDraft& d);

  std::size_t size() const { return names_.size(); }
  Prec rel(Letter a, Letter b) const;
  Prec rel(std::string_view a, std::string_view b) const;

  Letter letter(std::string_view name) const;  // throws MatrixError if unknown; "EPS" is ε
  std::optional<Letter> find(std::string_view name) const;
  const std::string& name(Letter l) const;
  std::vector<Letter> alphabet() const;
  TokenMode tokens() const { return tokens_; }
  // Cells not explicitly declared in the draft were filled by the default.
  bool declared(Letter a, Letter b) const { return declared_[a.index() * size() + b.index()]; }

  Word parse_word(std::string_view text) const;
  std::string format_word(const Word& w, std::string_view empty = "ε") const;
  std::string format_letter(Letter l) const;

  friend bool operator==(const PrecedenceMatrix& x, const PrecedenceMatrix& y) {
    return x.names_ == y.names_ && x.table_ == y.table_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<Prec> table_;
  std::vector<bool> declared_;
  TokenMode tokens_ = TokenMode::Chars;
};

// Chain predicate: a0[y]a1 with the first and last context letters a0, a1 ∈ Σ ∪ {ε}.
bool is_chain(const PrecedenceMatrix& m, Letter a0, std::span<const Letter> y, Letter a1);

// Context form: x^▷ [y] z^◁.
bool chain_context(const PrecedenceMatrix& m, const Word& x, const Word& y, const Word& z);

// Groups of the normal form λ(w). `closed` are the groups already reduced onto ⊥
// (a descending run), `open` the ones still stacked, bottom first.
struct CollapsedForm {
  std::vector<Word> closed;
  std::vector<Word> open;
  Word flat() const;
};

CollapsedForm collapsed_form(const PrecedenceMatrix& m, std::span<const Letter> w);
Word collapse(const PrecedenceMatrix& m, std::span<const Letter> w);

struct Profile {
  Letter first, last;
  LetterSet left, right;
  friend bool operator==(const Profile&, const Profile&) = default;
};

struct ProfileHash {
  std::size_t operator()(const Profile& p) const noexcept;
};

Profile profile(const PrecedenceMatrix& m, std::span<const Letter> w);
bool profiles_equal(const PrecedenceMatrix& m, const Word& x, const Word& y);
std::string format_profile(const PrecedenceMatrix& m, const Profile& p);

enum class StructuredClass { PushEq, PopEq, Both, Neither };
StructuredClass classify(const PrecedenceMatrix& m, std::span<const Letter> w);
bool in_pusheq(const PrecedenceMatrix& m, std::span<const Letter> w);  // Σ̂*_⋖≐
bool in_popeq(const PrecedenceMatrix& m, std::span<const Letter> w);   // Σ̂*_⋗≐

inline Letter first_letter(const Word& w) { return w.empty() ? Letter::eps() : w.front(); }
inline Letter last_letter(const Word& w) { return w.empty() ? Letter::eps() : w.back(); }

// Upper bound |Σ|²·2^(2|Σ|-2)+1 on the number of distinct profiles, in log2.
double log2_profile_bound(std::size_t sigma);

}  // namespace opal
