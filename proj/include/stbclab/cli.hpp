#pragma once

#include <string>
#include <vector>

namespace stbclab {

// Batch front-end. Exit codes: 0 success, 2 configuration error,
// 3 numerical failure.
int run_cli(const std::vector<std::string>& args);

// "a:b:c" (start:step:stop) or a single value, in dB.
std::vector<double> parse_grid(const std::string& spec);

}  // namespace stbclab
