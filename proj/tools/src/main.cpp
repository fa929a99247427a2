#include <iostream>
#include <string>
#include <vector>

#include "iselect/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return iselect::cli::run(args, std::cout, std::cerr);
}
