#include <iostream>

#include "eqc/cli.hpp"

int main(int argc, char** argv) { return eqc::cli::run(argc, argv, std::cout, std::cerr); }
