#include <iostream>
#include <string>
#include <vector>

#include "catchall/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return catchall::cli::run(args, std::cout, std::cerr);
}
