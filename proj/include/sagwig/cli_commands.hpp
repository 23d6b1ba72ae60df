#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace sagwig {

/// Exit codes: 0 success, 1 runtime/data error, 2 config/usage error,
/// 3 comparison below threshold.
struct CliOptions {
    std::string config_path;
    std::string out_dir;                 // overrides config outputs.dir when set
    std::optional<std::uint64_t> seed;   // overrides scan seed
    bool noiseless = false;              // forces a noiseless run
    double threshold = 0.99;             // compare: minimum Pearson
};

int cmd_simulate(const CliOptions& opt);
int cmd_reconstruct(const std::string& counts_csv_path, const CliOptions& opt);
int cmd_analytic(const CliOptions& opt);
int cmd_compare(const std::string& map_a_path, const std::string& map_b_path,
                double threshold);

/// Full argv entry point (CLI11 parsing); returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace sagwig
