#pragma once

#include <string>

#include "sagwig/config.hpp"

namespace sagwig {

/// Shortest round-trip decimal representation (bit-exact re-read).
std::string fmt_double(double v);

/// Write `content` atomically: temp file in the same directory, then rename.
void atomic_write_file(const std::string& path, const std::string& content);

/// counts CSV: header `ix,itheta,x_m,theta_rad,counts,mean_rate_hz`,
/// ix-major row order. Counts print as integers for sampled maps and as
/// shortest-round-trip doubles for noiseless maps.
std::string counts_to_csv(const CountMap& map);

/// Parse a counts CSV against the experiment config (supplies grids and
/// detector parameters; validates the row count and raster shape).
CountMap counts_from_csv(const std::string& csv_text, const ExperimentConfig& cfg);

/// Full JSON record of a run: config echo plus per-pixel data.
std::string counts_to_json(const CountMap& map, const ExperimentConfig& cfg);

/// wigner CSV: header `x_m,k_radpm,w`, x-major row order.
std::string wigner_to_csv(const WignerMap& map);
WignerMap wigner_from_csv(const std::string& csv_text);

std::string report_to_json(const ReconstructionReport& report);

std::string read_file(const std::string& path);

}  // namespace sagwig
