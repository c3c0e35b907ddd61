#pragma once
// The run / compare / report commands behind the CLI, exposed as library
// calls so they can be driven in-process. Each returns the process exit
// code: 0 success, 1 usage or configuration error, 2 runtime error.

#include <iosfwd>
#include <optional>
#include <string>

namespace fats {

struct CommandOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
};

// One arm end to end; writes metrics.csv, sessions.jsonl and the first
// user's final casebase.json under the output directory.
int cmd_run(const std::string& config_path, const std::string& variant_token,
            const CommandOverrides& overrides, std::ostream& out, std::ostream& err);

// Every configured arm; writes the combined metrics.csv and sessions.jsonl
// and prints the per-arm summary table (algorithm, AP, ATSD).
int cmd_compare(const std::string& config_path, const CommandOverrides& overrides,
                std::ostream& out, std::ostream& err);

// Reads a metrics CSV, writes series.csv (day vs avg_precision, one column
// per arm) next to it or under --out, and prints the summary table.
int cmd_report(const std::string& metrics_path, const std::optional<std::string>& out_dir,
               std::ostream& out, std::ostream& err);

}  // namespace fats
