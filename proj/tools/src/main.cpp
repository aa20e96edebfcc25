#include <iostream>

#include "fogbench_cli/cli.hpp"

int main(int argc, char** argv) { return fogbench::cli::cli_main(argc, argv, std::cout, std::cerr); }
