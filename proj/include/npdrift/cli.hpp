#ifndef NPDRIFT_CLI_HPP
#define NPDRIFT_CLI_HPP

#include <string>
#include <vector>

namespace npdrift {

// Batch front-end: simulate / fit / summarize subcommands.
// Exit codes: 0 success, 2 validation error, 3 numerical failure.
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, char** argv);

}  // namespace npdrift

#endif
