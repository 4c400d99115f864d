#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rpp {

// Full dispatcher behind the `rpp` binary; exposed for in-process testing.
// Exit codes: 0 success, 1 verification/runtime failure, 2 usage errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rpp
