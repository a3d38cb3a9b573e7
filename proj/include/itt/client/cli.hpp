#pragma once

#include <functional>
#include <iostream>
#include <string>
#include <vector>

namespace itt::client {

struct CliIo {
  std::istream& in = std::cin;
  std::ostream& out = std::cout;
  std::ostream& err = std::cerr;
  /// Reads a secret without echo; defaults to a terminal prompt, or a plain
  /// line from `in` when stdin is not a terminal.
  std::function<std::string(const std::string& prompt)> read_secret;
};

/// The `itt` command line. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, CliIo io);

}  // namespace itt::client
