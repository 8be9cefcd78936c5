#include "xbf_cli/cli.hpp"

#include <iostream>

int main(int argc, char **argv) {
  return xbf::cli::main_entry(argc, argv, std::cout, std::cerr);
}
