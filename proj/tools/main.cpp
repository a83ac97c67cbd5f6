#include <iostream>

#include "wmono/cli.hpp"

int main(int argc, char** argv) {
  return wmono::run_cli(argc, argv, std::cout, std::cerr);
}
