#include <iostream>

#include "stieltjes/cli.hpp"

int main(int argc, char** argv) { return stieltjes::cli::main_entry(argc, argv, std::cout, std::cerr); }
