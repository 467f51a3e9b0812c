#include "mallows/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return mallows::cli::run(argc, argv, std::cout, std::cerr); }
