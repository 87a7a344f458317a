#include "hwl_app.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return hwl::cli::run(std::move(args), std::cout, std::cerr);
}
