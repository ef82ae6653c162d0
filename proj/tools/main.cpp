#include <iostream>

#include "rllfb/cli.hpp"

int main(int argc, char** argv) { return rllfb::run_cli(argc, argv, std::cout, std::cerr); }
