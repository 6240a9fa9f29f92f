#include "moebius/cli.hpp"

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
    moebius::cli::Environment env;
    if (const char* threads = std::getenv("MOEBIUS_THREADS")) env.threads = threads;
    return moebius::cli::run({argv + 1, argv + argc}, std::cout, std::cerr, env);
}
