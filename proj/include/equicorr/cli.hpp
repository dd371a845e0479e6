#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace equicorr {

/// Entry point of the `equicorr` tool. Subcommands: run, reproduce-tables,
/// risk, threshold. Returns the process exit status; diagnostics go to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with argv[0] supplied internally.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace equicorr
