#include "pbtk_cli/app.hpp"

#include <iostream>

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  return pbtk::cli::run_app({argv + 1, argv + argc}, std::cout, std::cerr);
}
