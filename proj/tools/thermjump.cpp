#include <iostream>
#include <string>
#include <vector>

#include "thermjump/harness/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return thermjump::run_cli(args, std::cout, std::cerr);
}
