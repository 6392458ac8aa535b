#include <iostream>

#include "runsdist/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return runsdist::run_cli(args, std::cout, std::cerr);
}
