#include "sagwig/scan.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sagwig/parallel.hpp"
#include "sagwig/rng.hpp"

namespace sagwig {

CountMap expected_count_map(const EnsembleState& state, const ScanConfig& scan,
                            const DetectorModel& det, const InterferometerConfig& cfg) {
    if (!(scan.dwell > 0.0)) throw std::invalid_argument("scan: dwell time must be positive");
    if (scan.x_points.n < 1 || scan.theta_points.n < 1) {
        throw std::invalid_argument("scan: raster needs at least one point per axis");
    }
    if (!(det.dark_rate >= 0.0)) {
        throw std::invalid_argument("scan: dark rate must be nonnegative");
    }

    CountMap map;
    map.scan = scan;
    map.det = det;
    map.cfg = cfg;

    const std::size_t nx = static_cast<std::size_t>(scan.x_points.n);
    const std::size_t nt = static_cast<std::size_t>(scan.theta_points.n);
    map.x_actual.resize(nx);
    map.theta_actual.resize(nt);
    for (std::size_t i = 0; i < nx; ++i) {
        const int s = shift_samples(state.grid, scan.x_points.position(static_cast<int>(i)));
        map.x_actual[i] = static_cast<double>(s) * state.grid.spacing;
        if (i > 0 && !(map.x_actual[i] > map.x_actual[i - 1])) {
            throw std::invalid_argument(
                "scan: x raster pitch is below the field grid step, so neighboring points "
                "quantize onto the same sample; widen the pitch or refine the grid");
        }
    }
    for (std::size_t j = 0; j < nt; ++j) {
        const double theta = scan.theta_points.position(static_cast<int>(j));
        if (!(std::abs(std::sin(theta)) <= cfg.na_limit * (1.0 + 1e-12))) {
            std::ostringstream os;
            os << "scan: tilt raster reaches " << theta
               << " rad, beyond the collection aperture (|sin theta| <= " << cfg.na_limit << ")";
            throw std::invalid_argument(os.str());
        }
        map.theta_actual[j] = theta;
    }

    map.counts.assign(nx * nt, 0.0);
    map.mean_rates.assign(nx * nt, 0.0);
    parallel_for(nx, [&](std::size_t i) {
        for (std::size_t j = 0; j < nt; ++j) {
            const MirrorSetting setting{scan.x_points.position(static_cast<int>(i)),
                                        map.theta_actual[j]};
            const RateTriple r = interfere(state, setting, det, cfg);
            const double rate = r.total + det.dark_rate;
            map.mean_rates[map.index(i, j)] = rate;
            map.counts[map.index(i, j)] = rate * scan.dwell;
        }
    });
    return map;
}

CountMap sample_counts(const CountMap& expected, std::uint64_t seed) {
    CountMap out = expected;
    out.scan.seed = seed;
    out.scan.noiseless = false;
    const std::size_t nx = out.nx();
    const std::size_t nt = out.ntheta();
    parallel_for(nx, [&](std::size_t i) {
        for (std::size_t j = 0; j < nt; ++j) {
            const std::size_t idx = out.index(i, j);
            double mean = expected.mean_rates[idx] * expected.scan.dwell;
            if (mean < 0.0) {
                if (mean < -1e-9 * std::max(1.0, std::abs(expected.mean_rates[idx]))) {
                    throw std::runtime_error("scan: negative mean count (internal inconsistency)");
                }
                mean = 0.0;
            }
            CounterRng rng(stream_key(seed, i, j));
            out.counts[idx] = static_cast<double>(poisson_sample(mean, rng));
        }
    });
    return out;
}

CountMap run_scan(const EnsembleState& state, const ScanConfig& scan,
                  const DetectorModel& det, const InterferometerConfig& cfg) {
    const CountMap expected = expected_count_map(state, scan, det, cfg);
    if (scan.noiseless) return expected;
    return sample_counts(expected, scan.seed);
}

}  // namespace sagwig
