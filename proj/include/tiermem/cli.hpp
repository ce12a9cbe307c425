#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tiermem/common.hpp"

namespace tiermem {

/// Full command-line entry point, testable in-process. Returns the process
/// exit code: 0 success, 1 runtime/IO failure, 2 usage error.
int cli_main(const std::vector<std::string>& args);

/// "42-46" or "42,45,46" or "42" -> seed list. Throws InvalidConfig.
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

/// "full,lru" -> mode list, order preserved. Throws InvalidConfig.
std::vector<Mode> parse_mode_list(const std::string& text);

}  // namespace tiermem
