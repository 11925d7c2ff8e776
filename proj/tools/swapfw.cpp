#include <iostream>

#include "swapfw/cli/cli.hpp"

int main(int argc, char** argv) { return swapfw::run_cli(argc, argv, std::cout, std::cerr); }
