#include <iostream>

#include "jcd/cli.hpp"

int main(int argc, char** argv) {
  return jcd::CliMain({argv + 1, argv + argc}, std::cout, std::cerr);
}
