#include <iostream>

#include "fil/cli.hpp"

int main(int argc, char** argv) {
  return fil::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
