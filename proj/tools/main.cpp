#include <iostream>

#include "cpb/cli.hpp"

int main(int argc, char** argv) {
  return cpb::run_cli(argc, argv, std::cout, std::cerr);
}
