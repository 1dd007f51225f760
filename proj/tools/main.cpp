#include <iostream>

#include "fekete/cli.hpp"

int main(int argc, char** argv) { return fekete::cli::run(argc, argv, std::cout, std::cerr); }
