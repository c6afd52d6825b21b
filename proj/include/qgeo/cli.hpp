#pragma once

#include <string>
#include <vector>

namespace qgeo {

// Entry point shared by the binary and the in-process CLI tests.
// Exit codes: 0 all good / all certificates pass, 1 some certificate or
// check failed, 2 configuration or input error.
int run_main(int argc, const char* const* argv);

// Convenience overload; `args` excludes the program name.
int run_main(const std::vector<std::string>& args);

}  // namespace qgeo
