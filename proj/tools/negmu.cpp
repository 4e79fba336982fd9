#include "negmu/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return negmu::cli_main(argc, argv, std::cout, std::cerr);
}
