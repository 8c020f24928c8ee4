#include <iostream>

#include "etalab/cli.hpp"

int main(int argc, char** argv) { return etalab::cli::main(argc, argv, std::cout, std::cerr); }
