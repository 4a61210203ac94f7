#include <iostream>
#include <string>
#include <vector>

#include "whflip/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return whflip::run_command(args, std::cout, std::cerr);
}
