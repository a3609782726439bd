#include <iostream>

#include "funk/cli.hpp"

int main(int argc, char** argv) { return funk::run_cli(argc, argv, std::cout, std::cerr); }
