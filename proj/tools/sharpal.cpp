#include "sharpal/runner.hpp"

#include <iostream>

int main(int argc, char** argv) { return sharpal::run_cli(argc, argv, std::cout, std::cerr); }
