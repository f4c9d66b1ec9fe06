#include <iostream>
#include <string>
#include <vector>

#include "geotrans/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv, argv + argc);
    return geotrans::run_cli(args, std::cout, std::cerr);
}
