#include <iostream>

#include "girthlab/cli.hpp"

int main(int argc, char** argv) { return girthlab::cli::run(argc, argv, std::cout, std::cerr); }
