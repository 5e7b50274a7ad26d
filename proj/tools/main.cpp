#include <iostream>

#include "conediff/cli.hpp"

int main(int argc, char** argv) {
  return conediff::cli::run(argc, argv, std::cout, std::cerr);
}
