#include <iostream>

#include "nilcert/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return nilcert::run(args, std::cout, std::cerr);
}
