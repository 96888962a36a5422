#include "hullcert/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return hullcert::cli::run_cli(argc, argv, std::cout, std::cerr); }
