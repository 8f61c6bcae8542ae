#include <iostream>

#include "gazeforge/cli.hpp"

int main(int argc, char** argv) { return gazeforge::cli_main(argc, argv, std::cout, std::cerr); }
