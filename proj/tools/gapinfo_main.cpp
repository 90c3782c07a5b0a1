#include <iostream>

#include "gapinfo/cli.hpp"

int main(int argc, char** argv) {
  return gapinfo::cli::dispatch(argc, argv, std::cout, std::cerr);
}
