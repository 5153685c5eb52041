#include "opal/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <sstream>

#include "opal/antichain.hpp"
#include "opal/congruence.hpp"
#include "opal/io.hpp"
#include "opal/opg.hpp"
#include "opal/oracle.hpp"

namespace opal {

namespace {

class Printer {
 public:
  Printer(std::ostream& out, bool machine) : out_(out), machine_(machine) {}
  bool machine() const { return machine_; }

  // One record: tab separated in machine mode, "kind: a b c" otherwise.
  void record(const std::string& kind, std::initializer_list<std::string> fields) {
    out_ << kind;
    bool first = true;
    for (const auto& f : fields) {
      out_ << (machine_ ? "\t" : first ? ": " : " ") << f;
      first = false;
    }
    out_ << "\n";
  }
  std::ostream& raw() { return out_; }

 private:
  std::ostream& out_;
  bool machine_;
};

std::string word_text(const PrecedenceMatrix& m, const Word& w, bool machine) {
  return m.format_word(w, machine ? "EPS" : "ε");
}

Word parse_word_arg(const PrecedenceMatrix& m, const std::string& s) {
  try {
    return m.parse_word(s);
  } catch (const MatrixError& e) {
    throw CLI::ValidationError("word", e.what());
  }
}

void print_stats(Printer& p, const InclusionResult& r) {
  for (std::size_t i = 0; i < r.iterations.size(); ++i) {
    const auto& s = r.iterations[i];
    if (p.machine())
      p.record("iteration", {std::to_string(i + 1), std::to_string(s.total_words), std::to_string(s.nonempty_cells),
                             std::to_string(s.max_cell), std::to_string(s.inserted), std::to_string(s.pruned)});
    else
      p.raw() << "iteration " << i + 1 << ": words " << s.total_words << ", nonempty cells " << s.nonempty_cells
              << ", largest cell " << s.max_cell << ", inserted " << s.inserted << ", pruned " << s.pruned << "\n";
  }
  p.record("final-words", {std::to_string(r.final_words)});
}

int report_inclusion(Printer& p, const Opa& a, const InclusionResult& r, bool witness, bool stats,
                     const char* ok, const char* ko) {
  if (stats) print_stats(p, r);
  p.record("verdict", {r.holds ? ok : ko});
  if (!r.holds && witness) {
    p.record("witness", {word_text(a.matrix(), *r.witness, p.machine())});
    p.record("pair", {a.state_name(r.initial), a.state_name(r.final)});
  }
  return r.holds ? 0 : 1;
}

Cell parse_cell(const Opa& a, const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  if (parts.size() != 5) throw CLI::ValidationError("--cell", "expected s,t,a,b,c");
  auto state = [&](const std::string& s) {
    auto q = a.find_state(s);
    if (!q) throw CLI::ValidationError("--cell", "unknown state '" + s + "'");
    return *q;
  };
  auto letter = [&](const std::string& s) {
    auto l = a.matrix().find(s);
    if (!l) throw CLI::ValidationError("--cell", "unknown letter '" + s + "' (use EPS for ε)");
    return *l;
  };
  return {state(parts[0]), state(parts[1]), letter(parts[2]), letter(parts[3]), letter(parts[4])};
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Operator precedence automata: membership, inclusion, universality, emptiness"};
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "machine"}));

  std::string opa_path, opa_path2, word, grammar_path, cell_spec, order_name = "summary", fill = "GT";
  bool trace = false, witness = false, stats = false, no_prune = false;
  std::size_t max_len = 0, length = 0;

  auto add_order = [&](CLI::App* sub) {
    sub->add_option("--order", order_name, "Subsumption order for the right-hand automaton")
        ->check(CLI::IsMember({"summary", "structural"}));
  };
  auto add_fixpoint_flags = [&](CLI::App* sub) {
    sub->add_flag("--witness", witness, "Print a counterexample");
    sub->add_flag("--stats", stats, "Print per-iteration statistics");
    sub->add_flag("--no-prune", no_prune, "Keep every word instead of an antichain");
  };

  auto* member = app.add_subcommand("member", "Decide membership of a word");
  member->add_option("opa", opa_path)->required();
  member->add_option("word", word)->required();
  member->add_flag("--trace", trace, "Print an accepting run");

  auto* trace_cmd = app.add_subcommand("trace", "Print an accepting run of a word");
  trace_cmd->add_option("opa", opa_path)->required();
  trace_cmd->add_option("word", word)->required();

  auto* empty = app.add_subcommand("empty", "Decide emptiness");
  empty->add_option("opa", opa_path)->required();
  add_fixpoint_flags(empty);

  auto* universal = app.add_subcommand("universal", "Decide universality");
  universal->add_option("opa", opa_path)->required();
  add_fixpoint_flags(universal);
  add_order(universal);

  auto* include_cmd = app.add_subcommand("include", "Decide L(A) ⊆ L(B)");
  include_cmd->add_option("A", opa_path)->required();
  include_cmd->add_option("B", opa_path2)->required();
  add_fixpoint_flags(include_cmd);
  add_order(include_cmd);

  auto* sig = app.add_subcommand("sig", "Print the signature of a word");
  sig->add_option("opa", opa_path)->required();
  sig->add_option("word", word)->required();

  auto* classes = app.add_subcommand("classes", "Enumerate signature classes of short words");
  classes->add_option("opa", opa_path)->required();
  classes->add_option("--max-len", max_len, "Longest word considered")->required();

  auto* extract = app.add_subcommand("opg-extract", "Derive the precedence matrix of a grammar");
  extract->add_option("grammar", grammar_path)->required();
  extract->add_option("--default", fill, "Relation for cells the grammar leaves undefined, or none")
      ->check(CLI::IsMember({"LT", "EQ", "GT", "none"}));

  auto* oinclude = app.add_subcommand("oracle-include", "Search for an inclusion counterexample by enumeration");
  oinclude->add_option("A", opa_path)->required();
  oinclude->add_option("B", opa_path2)->required();
  oinclude->add_option("--max-len", max_len, "Longest word considered")->required();

  auto* ocat = app.add_subcommand("oracle-cat", "List the words of one length in a cell by simulation");
  ocat->add_option("opa", opa_path)->required();
  ocat->add_option("--cell", cell_spec, "s,t,a,b,c with EPS for ε")->required();
  ocat->add_option("--n", length, "Word length")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  Printer p(out, format == "machine");
  InclusionOptions iopt;
  iopt.prune = !no_prune;
  iopt.order = order_name == "structural" ? OrderKind::Structural : OrderKind::Summary;

  try {
    auto* sub = app.get_subcommands().front();
    if (sub == member || sub == trace_cmd) {
      auto a = load_opa(opa_path).automaton;
      Word w = parse_word_arg(a->matrix(), word);
      if (sub == member && !trace) {
        bool ok = accepts(*a, w);
        p.record("verdict", {ok ? "accepted" : "rejected"});
        return ok ? 0 : 1;
      }
      auto run = run_trace(*a, w);
      if (!run) {
        p.record("verdict", {"rejected"});
        return 1;
      }
      for (const auto& c : *run) {
        std::string input = word_text(a->matrix(), c.input, p.machine());
        if (p.machine())
          p.record("row", {a->state_name(c.state), input, format_stack(*a, c.stack)});
        else
          out << a->state_name(c.state) << " | " << input << " | " << format_stack(*a, c.stack) << "\n";
      }
      p.record("verdict", {"accepted"});
      return 0;
    }
    if (sub == empty) {
      auto a = load_opa(opa_path).automaton;
      return report_inclusion(p, *a, emptiness(*a, iopt), witness, stats, "empty", "nonempty");
    }
    if (sub == universal) {
      auto a = load_opa(opa_path).automaton;
      return report_inclusion(p, *a, universality(*a, iopt), witness, stats, "universal", "not-universal");
    }
    if (sub == include_cmd) {
      auto a = load_opa(opa_path).automaton;
      auto b = load_opa(opa_path2).automaton;
      return report_inclusion(p, *a, include(*a, *b, iopt), witness, stats, "ok", "ko");
    }
    if (sub == sig) {
      auto a = load_opa(opa_path).automaton;
      out << format_signature(*a, signature(*a, parse_word_arg(a->matrix(), word)), p.machine());
      return 0;
    }
    if (sub == classes) {
      WordBudget::check(max_len);
      auto a = load_opa(opa_path).automaton;
      auto r = enumerate_classes(*a, max_len);
      std::ostringstream bound;
      bound << "2^" << std::lround(log2_class_bound(a->matrix().size(), a->num_states()));
      p.record("classes", {std::to_string(r.classes.size())});
      p.record("profiles", {std::to_string(r.profiles)});
      p.record("words", {std::to_string(r.words)});
      p.record("bound", {bound.str()});
      for (const auto& c : r.classes)
        p.record("class", {word_text(a->matrix(), c.word, p.machine()), std::to_string(c.members)});
      return 0;
    }
    if (sub == extract) {
      Grammar g = load_grammar(grammar_path);
      auto check = is_opg(g);
      if (!check.ok()) {
        for (const auto& c : check.conflicts) {
          std::string rels, rules;
          for (const auto& t : c.relations) {
            rels += (rels.empty() ? "" : ",") + std::string(prec_keyword(t.prec));
            for (auto w : t.witnesses) rules += (rules.empty() ? "" : ",") + std::to_string(w + 1);
          }
          p.record("conflict", {c.left, c.right, rels, "rules " + rules});
        }
        return 1;
      }
      std::optional<Prec> f;
      if (fill != "none") f = prec_from_keyword(fill);
      out << format_matrix_draft(grammar_matrix(g, f));
      return 0;
    }
    if (sub == oinclude) {
      auto a = load_opa(opa_path).automaton;
      auto b = load_opa(opa_path2).automaton;
      auto w = brute_include(*a, *b, max_len);
      p.record("verdict", {w ? "ko" : "ok"});
      if (w) p.record("witness", {word_text(a->matrix(), *w, p.machine())});
      return w ? 1 : 0;
    }
    if (sub == ocat) {
      WordBudget::check(length);
      auto a = load_opa(opa_path).automaton;
      Cell c = parse_cell(*a, cell_spec);
      auto words = brute_cat_cell(*a, c, length);
      p.record("count", {std::to_string(words.size())});
      for (const auto& w : words) p.record("word", {word_text(a->matrix(), w, p.machine())});
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace opal
