#include <iostream>

#include "twistor/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    const twistor::CliResult r = twistor::run_cli(args);
    std::cout << r.out;
    std::cerr << r.err;
    return r.code;
}
