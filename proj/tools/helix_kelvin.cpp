#include <iostream>

#include "hk/cli.hpp"

int main(int argc, char** argv) {
    return hk::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
