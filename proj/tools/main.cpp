#include <iostream>

#include "toa_cli/commands.hpp"

int main(int argc, char** argv) { return toa::cli::run_cli(argc, argv, std::cout, std::cerr); }
