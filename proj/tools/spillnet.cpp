#include <iostream>

#include "spillnet/cli.hpp"

int main(int argc, char** argv) { return spillnet::cli::run(argc, argv, std::cout, std::cerr); }
