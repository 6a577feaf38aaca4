#include <iostream>
#include <vector>

#include "flagcalc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    flagcalc::cli::OutputEnvelope env = flagcalc::cli::run(args);
    std::cout << env.out;
    return env.exit_code;
}
