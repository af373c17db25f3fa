#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace plc::cli {

// Full command-line driver; args excludes the program name.
// Exit codes: 0 success / property holds / equivalent; 1 counterexample /
// not equivalent / not inductive; 2 usage or semantic error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace plc::cli
