#include <iostream>

#include "vorbo/cli.hpp"

int main(int argc, char** argv) {
  return vorbo::cli::run(argc, argv, std::cout, std::cerr);
}
