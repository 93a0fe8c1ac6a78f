#include <iostream>

#include "heisvar/cli.hpp"

int main(int argc, char** argv) { return heisvar::cli::main_entry(argc, argv, std::cout, std::cerr); }
