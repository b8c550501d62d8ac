#include <iostream>

#include "bac/cli.hpp"

int main(int argc, char** argv) { return bac::main_entry(argc, argv, std::cout, std::cerr); }
