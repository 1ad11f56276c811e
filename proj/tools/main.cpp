#include <iostream>

#include "app.hpp"

int main(int argc, char** argv) {
  return awpri::app::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
