#pragma once

#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>

#include "opal/opa.hpp"
#include "opal/opg.hpp"
#include "opal/opm.hpp"

namespace opal {

// Malformed input file. what() reads "<file>:<line>: <message>".
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string file, std::size_t line, const std::string& message);
  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

MatrixDraft parse_matrix_draft(const std::string& text, const std::string& file = "<matrix>");
PrecedenceMatrix parse_matrix(const std::string& text, const std::string& file = "<matrix>");
// Writes every cell explicitly, so parsing the output yields an equal matrix.
std::string format_matrix(const PrecedenceMatrix& m);
std::string format_matrix_draft(const MatrixDraft& d);

struct LoadedOpa {
  std::shared_ptr<Opa> automaton;
  std::string matrix_ref;  // as written in the file
};

// `matrix_ref` paths are resolved against `base_dir`.
LoadedOpa parse_opa(const std::string& text, const std::string& file, const std::filesystem::path& base_dir);
std::string format_opa(const Opa& a, const std::string& matrix_ref);

Grammar parse_grammar(const std::string& text, const std::string& file = "<grammar>");
std::string format_grammar(const Grammar& g);

std::string read_file(const std::filesystem::path& p);
std::shared_ptr<const PrecedenceMatrix> load_matrix(const std::filesystem::path& p);
LoadedOpa load_opa(const std::filesystem::path& p);
Grammar load_grammar(const std::filesystem::path& p);

}  // namespace opal
