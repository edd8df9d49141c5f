#include <iostream>
#include <string>
#include <vector>

#include "tileprop/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tileprop::cli_main(args, std::cout, std::cerr);
}
