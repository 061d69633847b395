#ifndef VCH_CLI_HPP
#define VCH_CLI_HPP

namespace vch {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  ///< verdict failed or a run blew up
inline constexpr int kExitUsage = 2;    ///< bad arguments, config or input files

/// Entry point of the vch command-line tool.
int run_cli(int argc, const char* const* argv);

}  // namespace vch

#endif  // VCH_CLI_HPP
