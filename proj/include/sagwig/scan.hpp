#pragma once

#include <cstdint>
#include <vector>

#include "sagwig/sagnac.hpp"

namespace sagwig {

/// Raster definition for a measurement run: mirror positions x, mirror tilts
/// theta, per-pixel dwell time, RNG seed and the noiseless switch.
struct ScanConfig {
    Grid x_points;
    Grid theta_points;
    double dwell = 0.1;
    std::uint64_t seed = 0;
    bool noiseless = false;
};

/// Raster acquisition record: per-pixel counts plus the per-pixel mean total
/// rate, with the experiment parameters echoed so downstream steps are
/// self-contained. x_actual holds the sample-quantized mirror positions the
/// displacement actually realized; theta_actual echoes the tilt raster.
struct CountMap {
    ScanConfig scan;
    DetectorModel det;
    InterferometerConfig cfg;
    std::vector<double> x_actual;
    std::vector<double> theta_actual;
    std::vector<double> counts;      // [ix * ntheta + itheta]
    std::vector<double> mean_rates;  // total mean rate [counts/s], same layout

    [[nodiscard]] std::size_t nx() const { return x_actual.size(); }
    [[nodiscard]] std::size_t ntheta() const { return theta_actual.size(); }
    [[nodiscard]] std::size_t index(std::size_t ix, std::size_t it) const {
        return ix * theta_actual.size() + it;
    }
};

/// Noiseless forward model: interfere() at every raster pixel; counts are
/// mean_rate * dwell exactly. Throws if the x raster quantizes onto
/// duplicate field samples or any |sin theta| exceeds the NA limit.
CountMap expected_count_map(const EnsembleState& state, const ScanConfig& scan,
                            const DetectorModel& det, const InterferometerConfig& cfg);

/// Poisson resampling of an expected map. Each pixel draws from its own
/// counter-based stream keyed by (seed, ix, itheta): the result is bit-exact
/// reproducible and independent of evaluation order and thread count.
/// mean_rates are carried over unchanged.
CountMap sample_counts(const CountMap& expected, std::uint64_t seed);

/// expected_count_map followed by sampling unless scan.noiseless.
CountMap run_scan(const EnsembleState& state, const ScanConfig& scan,
                  const DetectorModel& det, const InterferometerConfig& cfg);

}  // namespace sagwig
