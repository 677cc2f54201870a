#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hyperad::cli {

/// Exit statuses of the driver.
enum Status : int { kOk = 0, kVerificationFailed = 1, kUsage = 2, kTypeError = 3, kFuelExhausted = 4 };

/// Runs the driver on `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hyperad::cli
