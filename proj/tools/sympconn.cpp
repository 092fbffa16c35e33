#include <iostream>
#include <string>
#include <vector>

#include "sympconn/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return sympconn::run(args, std::cout, std::cerr);
}
