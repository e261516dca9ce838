#include <iostream>

#include "ming/cli.hpp"

int main(int argc, char** argv) { return ming::cli::main_entry(argc, argv, std::cout, std::cerr); }
