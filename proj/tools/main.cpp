#include "plrtest/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return plrtest::run_cli(argc, argv, std::cout, std::cerr); }
