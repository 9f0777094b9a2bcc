#include <iostream>
#include <string>
#include <vector>

#include "lzero/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return lzero::run_cli(args, std::cout, std::cerr);
}
