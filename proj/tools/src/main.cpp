#include <iostream>

#include "tomokernel/cli.hpp"

int main(int argc, char** argv) { return tomokernel::cli::run(argc, argv, std::cout, std::cerr); }
