#ifndef HOMOG_CLI_HPP
#define HOMOG_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace homog::cli
{

/// Exit codes: 0 all gates pass, 1 validation or tolerance failure, 2 usage error.
enum ExitCode { kPass = 0, kFail = 1, kUsage = 2 };

/// Runs one command given the arguments after the program name. Reports go
/// to --out when set and to `out` otherwise; diagnostics go to `err`.
int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err);

} // namespace homog::cli

#endif
