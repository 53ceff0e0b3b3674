#include <iostream>

#include "evchain/cli.hpp"

int main(int argc, char** argv) { return evchain::cli::run(argc, argv, std::cout, std::cerr); }
