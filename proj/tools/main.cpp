#include <vector>

#include "tiermem/cli.hpp"

int main(int argc, char** argv) {
    return tiermem::cli_main(std::vector<std::string>(argv + 1, argv + argc));
}
