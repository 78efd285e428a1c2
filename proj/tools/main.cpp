#include <iostream>

#include "allockit/cli/app.hpp"

int main(int argc, char** argv) { return allockit::cli::run(argc, argv, std::cout, std::cerr); }
