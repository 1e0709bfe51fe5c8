#include <iostream>

#include "pscb/cli.hpp"

int main(int argc, char** argv) { return pscb::run_cli(argc, argv, std::cout, std::cerr); }
