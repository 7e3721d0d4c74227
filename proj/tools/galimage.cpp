#include <iostream>

#include "galimage/cli.hpp"

int main(int argc, char** argv) { return galimage::cli::run(argc, argv, std::cout, std::cerr); }
