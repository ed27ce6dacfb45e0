#include <iostream>

#include "leastgrad/cli/app.hpp"

int main(int argc, char** argv) { return leastgrad::cli::run(argc, argv, std::cout, std::cerr); }
