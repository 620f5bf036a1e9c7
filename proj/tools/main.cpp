#include <iostream>

#include "cli_runner.hpp"

int main(int argc, char** argv)
{
    return eprlab::cli::run(argc, argv, std::cout, std::cerr);
}
