#include <iostream>

#include "flatres/cli.hpp"

int main(int argc, char** argv) { return flatres::cli::run(argc, argv, std::cout, std::cerr); }
