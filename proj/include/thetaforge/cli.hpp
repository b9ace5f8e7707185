#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "thetaforge/core_arith.hpp"

namespace thetaforge {

// "i", "-2.5", "0.5+1.2i", "1e-3-4i". Throws ParseError.
cplx parse_complex(const std::string& text);
// 15 significant digits, "a+bi" form.
std::string format_complex(cplx z);

enum ExitCode : int {
    kExitPass = 0,
    kExitFailure = 1,
    kExitUsage = 2,
    kExitEvaluation = 3,
};

// The command-line front end with explicit streams, for testing.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace thetaforge
