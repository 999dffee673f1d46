#include <iostream>

#include "genvector/cli.hpp"

int main(int argc, char** argv) { return genvector::cli::run(argc, argv, std::cout, std::cerr); }
