#ifndef PLATOON_CLI_H_
#define PLATOON_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace platoon::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIoError = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitTooLarge = 3;

/// `plan` subcommand; `args` excludes the program and subcommand names.
int run_plan(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

/// `oracle` subcommand.
int run_oracle(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err);

/// Dispatches on the first argument.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace platoon::cli

#endif  // PLATOON_CLI_H_
