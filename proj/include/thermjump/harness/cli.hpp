#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace thermjump {

/// Entry point of the `thermjump` tool. args[0] is the program name.
/// Returns 0 on success, 1 on runtime failure, 2 on usage or config errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace thermjump
