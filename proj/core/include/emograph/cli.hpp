#pragma once

#include <string>
#include <vector>

namespace emograph {

// Entry point behind the emograph binary. Exposed from the library so the
// subcommands can be exercised in-process by tests.
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, const char* const* argv);

}  // namespace emograph
