#include <iostream>
#include <string>
#include <vector>

#include "msocard/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return msocard::run(args, std::cout, std::cerr, std::cin);
}
