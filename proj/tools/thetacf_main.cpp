#include "thetacf/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return thetacf::run_cli(argc, argv, std::cout, std::cerr); }
