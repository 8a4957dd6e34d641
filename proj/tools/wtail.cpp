#include <iostream>
#include <string>
#include <vector>

#include "wtail/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return wtail::run_cli(args, std::cout, std::cerr);
}
