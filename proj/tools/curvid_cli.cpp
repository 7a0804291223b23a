#include <iostream>

#include "curvid/cli.hpp"

int main(int argc, char** argv) { return curvid::cli::main(argc, argv, std::cout, std::cerr); }
