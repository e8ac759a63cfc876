#include <vector>
#include <string>

#include "stbclab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return stbclab::run_cli(args);
}
