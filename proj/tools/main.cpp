#include <iostream>
#include <string>
#include <vector>

#include "extrema/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return extrema::run_cli(args, std::cout, std::cerr);
}
