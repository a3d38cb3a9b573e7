#include "itt/client/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return itt::client::run_cli(args, {});
}
