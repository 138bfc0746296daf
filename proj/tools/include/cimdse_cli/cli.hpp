#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace cimdse::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kParse = 2,      // bad arguments, unknown or malformed input files
  kInvariant = 3,  // inputs parse but violate a model invariant
  kIo = 4,         // reading or writing failed
};

/// Bundled data root: $CIMDSE_DATA_DIR if set, else the build or install tree.
std::filesystem::path data_dir();

/// Runs one command line. `args` excludes the program name. Results go to
/// `out` unless --out is given; diagnostics and timing go to `log`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& log);

}  // namespace cimdse::cli
