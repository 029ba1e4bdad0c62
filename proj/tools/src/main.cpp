#include <iostream>

#include "irsma_cli/cli.hpp"

int main(int argc, char** argv)
{
    return irsma::cli::cli_main(argc, argv, std::cout, std::cerr);
}
