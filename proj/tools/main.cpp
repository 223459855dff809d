#include <iostream>

#include "hhkit_cli.hpp"

int main(int argc, char** argv) { return hhkit::cli::run(argc, argv, std::cout, std::cerr); }
