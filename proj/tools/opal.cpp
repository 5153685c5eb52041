#include <iostream>

#include "opal/cli.hpp"

int main(int argc, char** argv) { return opal::run_cli(argc, argv, std::cout, std::cerr); }
