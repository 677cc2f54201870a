#include <iostream>

#include "hyperad/cli.hpp"

int main(int argc, char** argv) {
    return hyperad::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
