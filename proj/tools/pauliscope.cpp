#include "pauliscope/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);
    return pauliscope::cli::run_command({argv + 1, argv + argc}, std::cin, std::cout, std::cerr);
}
