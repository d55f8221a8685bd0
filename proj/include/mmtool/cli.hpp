#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mmtool {

// Command dispatcher. Exit codes: 0 success, 1 computation error, 2 usage
// error. Output goes to `out`, diagnostics to `err`.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cli_main(int argc, char** argv);

}  // namespace mmtool
