#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "opal/io.hpp"

namespace opal::test {

inline std::filesystem::path data(const std::string& name) { return std::filesystem::path(OPAL_DATA_DIR) / name; }

inline std::shared_ptr<Opa> fixture(const std::string& name) { return load_opa(data(name)).automaton; }

inline Word word(const Opa& a, const std::string& s) { return a.matrix().parse_word(s); }

}  // namespace opal::test
