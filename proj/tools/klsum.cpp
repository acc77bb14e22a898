#include <iostream>
#include <string>
#include <vector>

#include "klsum/cli.hpp"

int main(int argc, char** argv) {
  return klsum::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
