#pragma once

#include <string>
#include <vector>

#include "twistor/polynomial.hpp"

namespace twistor {

// exit codes: 0 all checks pass, 2 some check failed, 1 usage or input error
struct CliResult {
    int code = 0;
    std::string out;  // the JSON report
    std::string err;  // usage text, errors, and the --pretty summary
};

// args excludes the program name
CliResult run_cli(const std::vector<std::string>& args);

// "re+imi" forms: 2, -0.5, 1i, -i, 1.5-2e-3i, 0+1i
cd parse_complex(const std::string& s);
// comma separated complex numbers
std::vector<cd> parse_complex_list(const std::string& s);

}  // namespace twistor
