#include <iostream>
#include <string>
#include <vector>

#include "ordcif/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ordcif::cli::run(args, std::cout, std::cerr);
}
