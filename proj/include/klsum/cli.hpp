#pragma once
// Command-line front end. Every subcommand writes one artifact: a versioned
// JSON envelope, or a CSV table preceded by "# key=value" lines that echo the
// configuration and status.
#include <iosfwd>
#include <string>
#include <vector>

namespace klsum::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kArtifactVersion = "1.0.0";

enum class Status { kOk, kPreconditionFailed, kResourceLimit, kCheckFailed, kInternalError };

const char* to_string(Status s);

// 0 for ok; 2..5 for the other statuses in declaration order. Usage errors
// exit through CLI11 with its own nonzero codes.
int exit_code(Status s);

// Parses args (args[0] is the program name) and runs one subcommand. The
// artifact goes to `out`, or to the --out path (relative paths are resolved
// against $KLSUM_OUTPUT_DIR when set). Usage text and diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace klsum::cli
