#include <iostream>
#include <string>
#include <vector>

#include "popa/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return popa::cli::run(args, std::cout, std::cerr);
}
