#include <iostream>

#include "zl/cli.hpp"

int main(int argc, char** argv) {
    return zl::cli_main(argc, argv, std::cout, std::cerr);
}
