#include <iostream>
#include <string>
#include <vector>

#include "tunnelkit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tunnelkit::cli::dispatch(args, std::cout, std::cerr);
}
