#include <iostream>

#include "equicorr/cli.hpp"

int main(int argc, char** argv) {
  return equicorr::cli_main(argc, argv, std::cout, std::cerr);
}
