#include <iostream>

#include "nba/app/cli.hpp"

int main(int argc, char** argv) { return nba::run_cli(argc, argv, std::cout, std::cerr); }
