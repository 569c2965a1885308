#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace leojadce::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitTrialFailure = 2;

/// Entry point of the `leojadce` tool; args excludes the program name.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace leojadce::cli
