#include <iostream>

#include "mixsat/cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  return mixsat::run_cli(argc, argv, std::cout, std::cerr);
}
