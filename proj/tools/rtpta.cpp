#include <exception>
#include <iostream>

#include "rtpta/cli.hpp"

int main(int argc, char **argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return rtpta::cli::run(args, std::cout, std::cerr);
    } catch (const std::exception &e) {
        std::cerr << "rtpta: internal error: " << e.what() << "\n";
        return 70;
    }
}
