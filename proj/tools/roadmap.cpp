#include <iostream>

#include "roadmap/interface/cli.hpp"

int main(int argc, char** argv) {
  return roadmap::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
