#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return dynloc::cli::run(argc, argv, std::cout, std::cerr); }
