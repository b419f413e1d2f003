#include <iostream>

#include "ndep/cli.hpp"

int main(int argc, char** argv) { return ndep::cli::dispatch(argc, argv, std::cout, std::cerr); }
