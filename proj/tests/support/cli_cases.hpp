#pragma once

#include <string>
#include <vector>

namespace cimdse::testing {

struct CliResult {
  int code = 0;
  std::string out;
  std::string log;
};

CliResult run_cli(const std::vector<std::string>& args);

struct GoldenCase {
  std::string file;  // under tests/golden
  std::vector<std::string> args;
};

/// One pinned invocation per command and output format.
std::vector<GoldenCase> golden_cases();

}  // namespace cimdse::testing
