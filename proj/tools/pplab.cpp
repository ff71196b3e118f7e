#include <iostream>

#include "pplab/cli.hpp"

int main(int argc, char** argv) { return pplab::run_cli(argc, argv, std::cout, std::cerr); }
