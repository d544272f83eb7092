#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace wlp::cli {

// Exit codes.
enum Exit : int {
  kOk = 0,
  kUsage = 1,
  kParse = 2,
  kValidation = 3,
  kDivergence = 4,
  kTransform = 5,
};

// Runs one invocation. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wlp::cli
