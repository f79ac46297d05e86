#include <iostream>
#include <string>
#include <vector>

#include "lcoai/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return lcoai::cli::run(args, std::cout, std::cerr);
}
