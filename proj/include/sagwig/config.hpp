#pragma once

#include <stdexcept>
#include <string>

#include "sagwig/reconstruct.hpp"

namespace sagwig {

/// Configuration problem: carries the offending key path (and the line for
/// syntax errors). CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Full experiment description as loaded from a JSON config file.
struct ExperimentConfig {
    FieldSpec field;
    Grid grid;
    InterferometerConfig interferometer;
    DetectorModel detector;
    ScanConfig scan;
    BackgroundMethod background_method = BackgroundMethod::Calibration;
    double calibration_time = 2.0;
    std::string out_dir = "out";
    bool write_csv = true;
    bool write_json = true;
};

/// Parse and validate a config file. Unknown keys are errors (naming the key
/// path); semantic violations name the offending key.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

/// Round-trip helpers for embedding the config in output records.
std::string config_to_json(const ExperimentConfig& cfg);

}  // namespace sagwig
