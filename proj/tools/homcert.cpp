#include "homcert/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return homcert::run_cli(argc, argv, std::cout, std::cerr);
}
