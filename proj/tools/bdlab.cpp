#include <iostream>
#include <string>
#include <vector>

#include "bdlab/cli.hpp"

int main(int argc, char** argv) {
  return bdlab::run_cli(std::vector<std::string>(argv, argv + argc), std::cin, std::cout, std::cerr);
}
