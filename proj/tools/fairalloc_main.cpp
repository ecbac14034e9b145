#include <iostream>

#include "fairalloc/cli.hpp"

int main(int argc, char** argv) { return fairalloc::run_cli(argc, argv, std::cout, std::cerr); }
