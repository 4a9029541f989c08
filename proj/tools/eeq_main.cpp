#include <iostream>

#include "eeq/cli.hpp"

int main(int argc, char** argv) { return eeq::run_cli(argc, argv, std::cout, std::cerr); }
