#pragma once

#include "hahnmeasure/render.hpp"

namespace hm {

// Command dispatch shared by the hm binary, the python module and the tests.
// Exit codes: 0 ok, 1 usage/syntax, 2 domain (unsupported/divergent/domain),
// 3 precision exhausted.
struct DriverResult {
    int exit_code = 0;
    std::string output; // rendered text or JSON, newline-terminated
};

DriverResult run_command(const std::vector<std::string>& args);

} // namespace hm
