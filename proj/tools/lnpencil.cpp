#include "lnpencil/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return lnpencil::cli::run(argc, argv, std::cout, std::cerr); }
