#include <iostream>
#include <string>
#include <vector>

#include "entropy_bounds/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return entropy_bounds::cli::run(args, std::cout, std::cerr);
}
