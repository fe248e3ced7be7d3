#include <iostream>

#include "sqlo/cli.hpp"

int main(int argc, char** argv)
{
    return sqlo::cli::main_entry(argc, argv, std::cout, std::cerr);
}
