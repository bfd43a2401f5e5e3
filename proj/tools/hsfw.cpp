#include <iostream>

#include "hsfw/cli/commands.hpp"

int main(int argc, char** argv) { return hsfw::cli::run_cli(argc, argv, std::cout, std::cerr); }
