#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return dynbc::cli::run_cli({argv, argv + argc}, std::cout, std::cerr);
}
