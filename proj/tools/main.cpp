#include <iostream>

#include "stackboost/cli.hpp"

int main(int argc, char** argv) { return stackboost::cli::run(argc, argv, std::cout, std::cerr); }
