#pragma once

#include <string>
#include <vector>

namespace bisect {

// Entry point behind main().  Exit codes: 0 success, 2 configuration or usage error,
// 3 resource-guard refusal, 1 anything else (I/O and friends).
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, char** argv);

}  // namespace bisect
