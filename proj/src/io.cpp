#include "opal/io.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <set>
#include <sstream>

namespace opal {

ParseError::ParseError(std::string file, std::size_t line, const std::string& message)
    : std::runtime_error(file + ":" + (line ? std::to_string(line) + ":" : std::string()) + " " + message),
      file_(std::move(file)),
      line_(line) {}

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  std::size_t n = 0;
  while (std::getline(in, raw)) {
    ++n;
    std::istringstream ls(raw);
    Line line{n, {}};
    std::string tok;
    while (ls >> tok) {
      if (tok.front() == '#') break;
      line.tokens.push_back(tok);
    }
    if (!line.tokens.empty()) out.push_back(std::move(line));
  }
  return out;
}

bool single_code_point(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n == 1;
}

}  // namespace

MatrixDraft parse_matrix_draft(const std::string& text, const std::string& file) {
  MatrixDraft d;
  std::optional<TokenMode> mode;
  bool have_letters = false;
  for (const auto& [ln, t] : tokenize(text)) {
    const auto& kw = t[0];
    if (kw == "letters") {
      if (have_letters) throw ParseError(file, ln, "letters declared twice");
      d.letters.assign(t.begin() + 1, t.end());
      have_letters = true;
    } else if (kw == "prec") {
      if (t.size() != 4) throw ParseError(file, ln, "expected 'prec <sym|EPS> <LT|EQ|GT> <sym|EPS>'");
      auto p = prec_from_keyword(t[2]);
      if (!p) throw ParseError(file, ln, "expected LT, EQ or GT, found '" + t[2] + "'");
      d.entries.push_back({t[1], *p, t[3], ln});
    } else if (kw == "default") {
      std::optional<Prec> p;
      if (t.size() == 2) p = prec_from_keyword(t[1]);
      if (!p) throw ParseError(file, ln, "expected 'default <LT|EQ|GT>'");
      d.fill = p;
    } else if (kw == "tokens") {
      if (t.size() != 2 || (t[1] != "chars" && t[1] != "spaced"))
        throw ParseError(file, ln, "expected 'tokens chars' or 'tokens spaced'");
      mode = t[1] == "chars" ? TokenMode::Chars : TokenMode::Spaced;
    } else {
      throw ParseError(file, ln, "expected one of letters, prec, default, tokens; found '" + kw + "'");
    }
  }
  if (!have_letters) throw ParseError(file, 0, "missing 'letters' declaration");
  d.tokens = mode.value_or(std::all_of(d.letters.begin(), d.letters.end(), single_code_point) ? TokenMode::Chars
                                                                                                : TokenMode::Spaced);
  return d;
}

PrecedenceMatrix parse_matrix(const std::string& text, const std::string& file) {
  auto d = parse_matrix_draft(text, file);
  auto violations = validate_matrix(d);
  if (!violations.empty()) {
    const auto& v = violations.front();
    std::size_t ln = 0;
    for (const auto& e : d.entries)
      if (e.left == v.left && e.right == v.right) ln = e.line;
    std::string msg = v.message;
    if (violations.size() > 1) msg += " (and " + std::to_string(violations.size() - 1) + " more)";
    throw ParseError(file, ln, msg);
  }
  return PrecedenceMatrix::build(d);
}

std::string format_matrix_draft(const MatrixDraft& d) {
  std::ostringstream out;
  out << "tokens " << (d.tokens == TokenMode::Chars ? "chars" : "spaced") << "\n";
  out << "letters";
  for (const auto& l : d.letters) out << ' ' << l;
  out << "\n";
  if (d.fill) out << "default " << prec_keyword(*d.fill) << "\n";
  for (const auto& e : d.entries) out << "prec " << e.left << ' ' << prec_keyword(e.prec) << ' ' << e.right << "\n";
  return out.str();
}

std::string format_matrix(const PrecedenceMatrix& m) {
  MatrixDraft d;
  d.tokens = m.tokens();
  for (Letter a : m.alphabet()) d.letters.push_back(m.name(a));
  for (Letter a : m.alphabet())
    for (Letter b : m.alphabet()) d.entries.push_back({m.name(a), m.rel(a, b), m.name(b), 0});
  return format_matrix_draft(d);
}

LoadedOpa parse_opa(const std::string& text, const std::string& file, const std::filesystem::path& base_dir) {
  OpaDraft d;
  std::optional<std::string> ref;
  std::size_t states_line = 0;
  for (const auto& [ln, t] : tokenize(text)) {
    const auto& kw = t[0];
    if (kw == "matrix") {
      if (t.size() != 2) throw ParseError(file, ln, "expected 'matrix <path>'");
      ref = t[1];
    } else if (kw == "states") {
      d.states.insert(d.states.end(), t.begin() + 1, t.end());
      states_line = ln;
    } else if (kw == "initial") {
      d.initial.insert(d.initial.end(), t.begin() + 1, t.end());
    } else if (kw == "final") {
      d.final.insert(d.final.end(), t.begin() + 1, t.end());
    } else if (kw == "push" || kw == "shift" || kw == "pop") {
      if (t.size() != 4)
        throw ParseError(file, ln,
                         kw == "pop" ? "expected 'pop <state> <stored-state> <state>'"
                                     : "expected '" + kw + " <state> <letter> <state>'");
      auto& list = kw == "push" ? d.push : kw == "shift" ? d.shift : d.pop;
      list.push_back({t[1], t[2], t[3], ln});
    } else {
      throw ParseError(file, ln, "expected one of matrix, states, initial, final, push, shift, pop; found '" + kw + "'");
    }
  }
  if (!ref) throw ParseError(file, 0, "missing 'matrix <path>' declaration");
  if (d.states.empty()) throw ParseError(file, 0, "missing 'states' declaration");

  std::shared_ptr<const PrecedenceMatrix> m = load_matrix(base_dir / *ref);

  std::set<std::string> names;
  for (const auto& s : d.states)
    if (!names.insert(s).second) throw ParseError(file, states_line, "state '" + s + "' declared twice");
  if (d.states.size() > kMaxStates) throw ParseError(file, states_line, "at most 64 states are supported");
  auto check_state = [&](const std::string& s, std::size_t ln) {
    if (!names.contains(s)) throw ParseError(file, ln, "unknown state '" + s + "'");
  };
  for (const auto* v : {&d.initial, &d.final})
    for (const auto& s : *v) check_state(s, 0);
  for (const auto* list : {&d.push, &d.shift}) {
    for (const auto& e : *list) {
      check_state(e.from, e.line);
      check_state(e.to, e.line);
      auto l = m->find(e.label);
      if (!l || l->is_eps()) throw ParseError(file, e.line, "unknown letter '" + e.label + "'");
    }
  }
  for (const auto& e : d.pop) {
    check_state(e.from, e.line);
    check_state(e.label, e.line);
    check_state(e.to, e.line);
  }
  return {std::make_shared<Opa>(m, d), *ref};
}

std::string format_opa(const Opa& a, const std::string& matrix_ref) {
  std::ostringstream out;
  const auto& m = a.matrix();
  auto set_line = [&](const char* kw, StateSet s) {
    out << kw;
    for (State q = 0; q < a.num_states(); ++q)
      if (s & state_bit(q)) out << ' ' << a.state_name(q);
    out << "\n";
  };
  out << "matrix " << matrix_ref << "\n";
  out << "states";
  for (State q = 0; q < a.num_states(); ++q) out << ' ' << a.state_name(q);
  out << "\n";
  set_line("initial", a.initial());
  set_line("final", a.final());
  for (const char* kw : {"push", "shift"}) {
    for (State q = 0; q < a.num_states(); ++q)
      for (Letter l : m.alphabet()) {
        StateSet s = kw[1] == 'u' ? a.push(q, l) : a.shift(q, l);
        for (State to = 0; to < a.num_states(); ++to)
          if (s & state_bit(to)) out << kw << ' ' << a.state_name(q) << ' ' << m.name(l) << ' ' << a.state_name(to) << "\n";
      }
  }
  for (State q = 0; q < a.num_states(); ++q)
    for (State p = 0; p < a.num_states(); ++p)
      for (State to = 0; to < a.num_states(); ++to)
        if (a.pop(q, p) & state_bit(to))
          out << "pop " << a.state_name(q) << ' ' << a.state_name(p) << ' ' << a.state_name(to) << "\n";
  return out.str();
}

Grammar parse_grammar(const std::string& text, const std::string& file) {
  std::optional<std::string> start;
  std::vector<Rule> rules;
  for (const auto& [ln, t] : tokenize(text)) {
    if (t[0] == "start") {
      if (t.size() != 2) throw ParseError(file, ln, "expected 'start <nonterminal>'");
      start = t[1];
    } else if (t[0] == "rule") {
      if (t.size() < 4 || t[2] != "->") throw ParseError(file, ln, "expected 'rule <nonterminal> -> <symbols>'");
      std::vector<std::string> alt;
      auto flush = [&] {
        if (alt.size() == 1 && alt[0] == "EPSILON") alt.clear();
        else if (alt.empty()) throw ParseError(file, ln, "empty alternative; write EPSILON for an empty body");
        else if (std::find(alt.begin(), alt.end(), "EPSILON") != alt.end())
          throw ParseError(file, ln, "EPSILON must stand alone in an alternative");
        rules.push_back({t[1], alt});
        alt.clear();
      };
      for (std::size_t i = 3; i < t.size(); ++i) {
        if (t[i] == "|") flush();
        else alt.push_back(t[i]);
      }
      flush();
    } else {
      throw ParseError(file, ln, "expected 'start' or 'rule', found '" + t[0] + "'");
    }
  }
  if (!start) throw ParseError(file, 0, "missing 'start <nonterminal>' declaration");
  return Grammar(*start, std::move(rules));
}

std::string format_grammar(const Grammar& g) {
  std::ostringstream out;
  out << "start " << g.start() << "\n";
  for (const auto& r : g.rules()) {
    out << "rule " << r.lhs << " ->";
    if (r.rhs.empty()) out << " EPSILON";
    for (const auto& s : r.rhs) out << ' ' << s;
    out << "\n";
  }
  return out.str();
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ParseError(p.string(), 0, "cannot open file");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::shared_ptr<const PrecedenceMatrix> load_matrix(const std::filesystem::path& p) {
  return std::make_shared<PrecedenceMatrix>(parse_matrix(read_file(p), p.string()));
}

LoadedOpa load_opa(const std::filesystem::path& p) { return parse_opa(read_file(p), p.string(), p.parent_path()); }

Grammar load_grammar(const std::filesystem::path& p) { return parse_grammar(read_file(p), p.string()); }

}  // namespace opal
