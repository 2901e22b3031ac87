#include <iostream>

#include "bppnet/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return bppnet::run_cli(args, std::cout, std::cerr);
}
