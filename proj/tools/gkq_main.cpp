#include "cli/app.hpp"

#include <iostream>

int main(int argc, char** argv) { return gkq::cli::run_app(argc, argv, std::cout, std::cerr); }
