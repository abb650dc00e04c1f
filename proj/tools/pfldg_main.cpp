#include <iostream>
#include <string>
#include <vector>

#include "pfldg/experiments.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return pfldg::run_main(args, std::cout, std::cerr);
}
