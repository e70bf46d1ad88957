#include <iostream>

#include "rgtest/cli.hpp"

int main(int argc, char** argv) {
    return rgtest::cli::run(argc, argv, std::cout, std::cerr);
}
