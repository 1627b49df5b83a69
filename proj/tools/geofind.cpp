#include <iostream>

#include "geofind/cli.hpp"

int main(int argc, char** argv) { return geofind::cli_main(argc, argv, std::cout, std::cerr); }
