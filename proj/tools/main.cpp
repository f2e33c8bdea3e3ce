#include <iostream>

#include "ecpp/cli.hpp"

int main(int argc, char** argv) { return ecpp::cli::run(argc, argv, std::cout, std::cerr); }
