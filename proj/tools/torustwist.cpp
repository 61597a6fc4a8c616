#include <iostream>

#include "torustwist/cli/commands.hpp"

int main(int argc, char** argv) { return torustwist::cli::main_entry(argc, argv, std::cout, std::cerr); }
