#include <iostream>

#include "bbpa/cli.hpp"

int main(int argc, char** argv)
{
    return bbpa::cli::run(argc, argv, std::cout, std::cerr);
}
