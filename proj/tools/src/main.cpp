#include <iostream>

#include "starq_cli/cli.hpp"

int main(int argc, char** argv) { return starq::cli::main_entry(argc, argv, std::cout, std::cerr); }
