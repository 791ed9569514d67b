// Copyright 2026 The QSDC Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line frontend.
//
// Every subcommand works from one JSON document, the effective
// configuration: built-in defaults, overlaid by --config FILE, overlaid by
// flags. That document is echoed into every report so a result can be
// reproduced from the report alone.
//
// Exit codes: 0 on completion (a session aborted because eavesdropping was
// detected is a completed run), 1 on internal or I/O errors, 2 on usage or
// configuration errors.

#ifndef QSDC_CLI_HPP
#define QSDC_CLI_HPP

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "qsdc/report.hpp"
#include "qsdc/serialization.hpp"

namespace qsdc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

enum class Command { Run, Attack, Suite, Sweep, Ecc, FitGamma };
std::string_view to_string(Command command);

/// Bad flags, missing fields or a malformed config file.
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct CliConfig {
    Command command = Command::Run;
    std::optional<std::string> config_path;
    std::optional<std::string> output_path;
    ReportFormat format = ReportFormat::Csv;
    int verbosity = 0;
    unsigned threads = 1;
    /// Set when --help was requested; execute prints it and succeeds.
    std::optional<std::string> help_text;
    /// Everything that determines the results, including "seed" and "trials".
    Json effective;
};

/// Throws UsageError (whose message includes the usage text) on any problem.
CliConfig parse_args(int argc, const char* const* argv);

int execute(const CliConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + execute with the exit-code contract applied.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qsdc

#endif  // QSDC_CLI_HPP
