#pragma once

#include <ostream>

namespace pcsmaa {

// Entry point behind the `pcsmaa` executable. Exit status: 0 success,
// 1 invalid input, 2 infeasible configuration or bad usage.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pcsmaa
