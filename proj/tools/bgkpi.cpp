#include <iostream>

#include "bgkpi/cli_io.hpp"

int main(int argc, char** argv) { return bgkpi::cli_run(argc, argv, std::cout, std::cerr); }
