#pragma once

#include <string>
#include <vector>

namespace guesswork::cli {

// Exit codes: 0 ok, 2 invalid input or source spec, 3 numerical failure,
// 4 resource cap exceeded.
int run_cli(int argc, const char* const* argv);

// argv convenience for in-process callers; args excludes the program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace guesswork::cli
