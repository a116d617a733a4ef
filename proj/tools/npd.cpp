#include <iostream>
#include <string>
#include <vector>

#include "npd/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return npd::dispatch(args, std::cout, std::cerr);
}
