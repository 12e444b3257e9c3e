#include <iostream>

#include "curator/commands.hpp"

int main(int argc, char** argv) {
  return curator::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
