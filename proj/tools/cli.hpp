#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace teamsem::cli {

/// Runs one batch invocation. Exit codes: 0 = holds / success,
/// 1 = fails / falsified, 2 = usage or data error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace teamsem::cli
