#include <string>
#include <vector>

#include "blframe/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return blf::cli::run_command(args);
}
