#include <iostream>

#include "hrp/cli.hpp"

int main(int argc, char** argv) { return hrp::cli::run(argc, argv, std::cout, std::cerr); }
