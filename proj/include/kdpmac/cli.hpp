#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kdpmac::cli {

/// Full command-line driver; `main` is a thin wrapper around this so tests
/// can run commands in-process. Exit codes: 0 success / policy match,
/// 1 verification or scenario mismatch, 2 usage or input error,
/// 3 key generation failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kdpmac::cli
