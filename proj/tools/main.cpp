#include <iostream>

#include "h2ion/app.hpp"

int main(int argc, char** argv) { return h2ion::app::run_cli(argc, argv, std::cout, std::cerr); }
