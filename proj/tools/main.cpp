#include <iostream>

#include "skilldisc/cli/commands.hpp"

int main(int argc, char** argv) { return skilldisc::cli::run(argc, argv, std::cout, std::cerr); }
