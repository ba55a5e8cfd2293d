#include <iostream>

#include "hfdae/cli.hpp"

int main(int argc, char** argv) { return hfdae::cli::run(argc, argv, std::cout, std::cerr); }
