#include <iostream>

#include "treezeta/cli.hpp"

int main(int argc, char** argv) { return treezeta::cli::run_cli(argc, argv, std::cout, std::cerr); }
