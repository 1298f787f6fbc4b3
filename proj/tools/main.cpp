#include <iostream>
#include <string>
#include <vector>

#include "mlsn/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return mlsn::run_cli(args, std::cout, std::cerr);
}
