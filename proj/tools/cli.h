#ifndef LCQ_TOOLS_CLI_H_
#define LCQ_TOOLS_CLI_H_

#include <iosfwd>

namespace lcq {

// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitUnanswerable = 4;

// Entry point of the `lcq` tool, writing results to `out` and diagnostics
// to `err`. Returns the process exit status.
int RunCli(int argc, const char *const *argv, std::ostream &out,
           std::ostream &err);

}  // namespace lcq

#endif  // LCQ_TOOLS_CLI_H_
