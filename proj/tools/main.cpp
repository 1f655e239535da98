#include <iostream>

#include "metallic/cli.hpp"

int main(int argc, char** argv) { return mk::cli::run(argc, argv, std::cout, std::cerr); }
