#include <iostream>

#include "monoscan/commands.hpp"

int main(int argc, char** argv) {
  return monoscan::run_cli(argc, argv, std::cout, std::cerr);
}
