#include <iostream>
#include <string>
#include <vector>

#include "mab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return mab::cli::run(args, std::cout, std::cerr);
}
