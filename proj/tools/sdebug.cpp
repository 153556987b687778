#include <iostream>
#include <string>
#include <vector>

#include "sdebug/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sdebug::run_cli(args, std::cout, std::cerr);
}
