#include <iostream>

#include "pcsmaa/cli.hpp"

int main(int argc, char** argv) { return pcsmaa::run_cli(argc, argv, std::cout, std::cerr); }
