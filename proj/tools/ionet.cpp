#include "ionet/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return ionet::cli::run(argc, argv, std::cout, std::cerr);
}
