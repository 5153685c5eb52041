#pragma once

#include <ostream>

namespace opal {

// Exit codes: 0 when the checked property holds, 1 when it fails, 2 on bad input.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace opal
