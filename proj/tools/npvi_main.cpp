#include <iostream>
#include <string>
#include <vector>

#include "npvi/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return npvi::cli::run(args, std::cerr);
}
