#include <iostream>
#include <string>
#include <vector>

#include "rnforge/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rnforge::cli::run(args, std::cout, std::cerr);
}
