#include <iostream>

#include "gmflou/commands.hpp"

int main(int argc, char** argv) { return gmflou::run_cli(argc, argv, std::cout, std::cerr); }
