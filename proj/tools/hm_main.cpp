#include <iostream>

#include "hahnmeasure/driver.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    hm::DriverResult r = hm::run_command(args);
    if (r.exit_code == 0)
        std::cout << r.output;
    else
        std::cerr << r.output;
    return r.exit_code;
}
