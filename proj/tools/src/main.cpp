#include <iostream>

#include "ntnlab_cli/cli.hpp"

int main(int argc, char** argv) {
  return ntn::cli::run(argc, argv, std::cout, std::cerr);
}
