#include <iostream>

#include "kgo/cli.hpp"

int main(int argc, char** argv)
{
    return kgo::cli::run(argc, argv, std::cout, std::cerr);
}
