#include <exception>
#include <iostream>

#include "sagin/commands.hpp"

int main(int argc, char** argv) {
  try {
    return sagin::commands::run_cli(argc, argv, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
