#include <iostream>

#include "nwspec/cli.hpp"

int main(int argc, char** argv) { return nwspec::cli::run(argc, argv, std::cout, std::cerr); }
