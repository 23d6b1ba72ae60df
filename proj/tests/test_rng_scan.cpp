#include <stdlib.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "sagwig/field.hpp"
#include "sagwig/rng.hpp"
#include "sagwig/scan.hpp"

using namespace sagwig;

namespace {

EnsembleState tophat_state() {
    const Grid grid = make_grid(1010, 4.0e-3, 0.0);
    FieldSpec spec;
    spec.kind = FieldKind::TopHat;
    spec.width = 4.0e-4;
    return make_state(spec, grid);
}

DetectorModel preset_detector() {
    DetectorModel det;
    det.eta = 0.11;
    det.photon_flux = 1818181.8181818181;  // eta * flux = 2e5 exactly
    return det;
}

InterferometerConfig preset_bench() {
    InterferometerConfig cfg;
    cfg.wavelength = 6.33e-7;
    cfg.na_limit = 0.09;
    return cfg;
}

ScanConfig small_scan(const Grid& field_grid) {
    ScanConfig scan;
    scan.x_points = Grid{5, 0.0, 30.0 * field_grid.spacing};
    scan.theta_points = Grid{5, 0.0, 0.002};
    scan.dwell = 0.1;
    scan.seed = 99;
    return scan;
}

struct MomentStats {
    double mean = 0.0;
    double var = 0.0;
};

MomentStats poisson_stats(double mu, std::uint64_t key, int draws) {
    CounterRng rng(key);
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < draws; ++i) {
        const double v = static_cast<double>(poisson_sample(mu, rng));
        s1 += v;
        s2 += v * v;
    }
    const double mean = s1 / draws;
    return MomentStats{mean, s2 / draws - mean * mean};
}

}  // namespace

TEST_CASE("counter stream reproduces the reference avalanche sequence") {
    CounterRng rng(0);
    CHECK(rng.next_u64() == 0xE220A8397B1DCDAFull);
    CHECK(rng.next_u64() == 0x6E789E6AA1B965F4ull);
    CHECK(rng.next_u64() == 0x06C45D188009454Full);

    CounterRng u(12345);
    for (int i = 0; i < 1000; ++i) {
        const double v = u.next_unit();
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("stream keys are deterministic and pixel-distinct") {
    CHECK(stream_key(7, 3, 4) == stream_key(7, 3, 4));
    CHECK(stream_key(7, 3, 4) != stream_key(7, 4, 3));
    CHECK(stream_key(7, 3, 4) != stream_key(8, 3, 4));
    CHECK(stream_key(7, 0, 0) != stream_key(7, 0, 1));
    CHECK(stream_key(7, 0, 0) != stream_key(7, 1, 0));

    // no collisions over a raster-sized block
    std::vector<std::uint64_t> keys;
    for (std::uint64_t i = 0; i < 64; ++i) {
        for (std::uint64_t j = 0; j < 64; ++j) keys.push_back(stream_key(633001, i, j));
    }
    std::sort(keys.begin(), keys.end());
    CHECK(std::adjacent_find(keys.begin(), keys.end()) == keys.end());
}

TEST_CASE("poisson sampling: edge cases and both regimes") {
    CounterRng rng(1);
    CHECK(poisson_sample(0.0, rng) == 0);
    CHECK_THROWS_AS((void)poisson_sample(-1.0, rng), std::invalid_argument);

    // small-mean (product method) regime
    const MomentStats small = poisson_stats(3.0, 17, 20000);
    CHECK(small.mean == doctest::Approx(3.0).epsilon(0.0333));  // +-0.1
    CHECK(small.var / small.mean > 0.9);
    CHECK(small.var / small.mean < 1.1);

    // transformed-rejection regime just above the switch point
    const MomentStats mid = poisson_stats(12.0, 18, 20000);
    CHECK(mid.mean == doctest::Approx(12.0).epsilon(0.0209));  // +-0.25
    CHECK(mid.var / mid.mean > 0.9);
    CHECK(mid.var / mid.mean < 1.1);

    // large-mean regime (the photon-counting operating point)
    const MomentStats big = poisson_stats(1.0e4, 19, 20000);
    CHECK(big.mean == doctest::Approx(1.0e4).epsilon(1e-3));  // +-10
    CHECK(big.var / big.mean > 0.9);
    CHECK(big.var / big.mean < 1.1);

    // draws are nonnegative integers
    CounterRng r2(23);
    for (int i = 0; i < 100; ++i) {
        const long long v = poisson_sample(50.0, r2);
        CHECK(v >= 0);
    }
}

TEST_CASE("noiseless raster: quantized positions and exact rates") {
    const EnsembleState st = tophat_state();
    const DetectorModel det = preset_detector();
    const InterferometerConfig cfg = preset_bench();
    const ScanConfig scan = small_scan(st.grid);

    const CountMap map = expected_count_map(st, scan, det, cfg);
    REQUIRE(map.nx() == 5);
    REQUIRE(map.ntheta() == 5);

    // realized mirror positions are integer grid steps, strictly increasing
    const std::vector<int> steps = {-60, -30, 0, 30, 60};
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(map.x_actual[i] ==
              doctest::Approx(steps[i] * st.grid.spacing).epsilon(1e-12));
        if (i > 0) CHECK(map.x_actual[i] > map.x_actual[i - 1]);
    }
    for (std::size_t j = 0; j < 5; ++j) {
        CHECK(map.theta_actual[j] == scan.theta_points.position(static_cast<int>(j)));
    }

    // phase-space origin: perfect destructive interference, rate 0
    CHECK(std::abs(map.mean_rates[map.index(2, 2)]) < 1e-6);
    // far displacement: the beam misses its mirror image, rate eta*flux/2
    for (std::size_t j = 0; j < 5; ++j) {
        CHECK(map.mean_rates[map.index(0, j)] == doctest::Approx(1.0e5).epsilon(1e-9));
    }
    // counts are exactly rate * dwell
    for (std::size_t idx = 0; idx < map.counts.size(); ++idx) {
        CHECK(map.counts[idx] == map.mean_rates[idx] * scan.dwell);
    }

    // dark counts shift every pixel's rate
    DetectorModel dark = det;
    dark.dark_rate = 100.0;
    const CountMap dmap = expected_count_map(st, scan, dark, cfg);
    CHECK(dmap.mean_rates[dmap.index(2, 2)] == doctest::Approx(100.0).epsilon(1e-9));

    // validation: raster pitch below the grid step collapses pixels
    ScanConfig bad = scan;
    bad.x_points = Grid{5, 0.0, 0.4 * st.grid.spacing};
    CHECK_THROWS_AS(expected_count_map(st, bad, det, cfg), std::invalid_argument);
    // tilt raster beyond the collection aperture
    bad = scan;
    bad.theta_points = Grid{5, 0.0, 0.05};  // reaches 0.1 rad
    CHECK_THROWS_AS(expected_count_map(st, bad, det, cfg), std::invalid_argument);
    bad = scan;
    bad.dwell = 0.0;
    CHECK_THROWS_AS(expected_count_map(st, bad, det, cfg), std::invalid_argument);
    bad = scan;
    DetectorModel negdark = det;
    negdark.dark_rate = -1.0;
    CHECK_THROWS_AS(expected_count_map(st, bad, negdark, cfg), std::invalid_argument);
}

TEST_CASE("poisson resampling is seeded, reproducible and integer-valued") {
    const EnsembleState st = tophat_state();
    const DetectorModel det = preset_detector();
    const InterferometerConfig cfg = preset_bench();
    const CountMap expected = expected_count_map(st, small_scan(st.grid), det, cfg);

    const CountMap a = sample_counts(expected, 633001);
    const CountMap b = sample_counts(expected, 633001);
    const CountMap c = sample_counts(expected, 633002);
    CHECK(a.counts == b.counts);
    CHECK(a.counts != c.counts);
    CHECK(a.scan.seed == 633001);
    CHECK_FALSE(a.scan.noiseless);
    CHECK(a.mean_rates == expected.mean_rates);

    for (double v : a.counts) {
        CHECK(v >= 0.0);
        CHECK(v == std::floor(v));
    }

    // a tiny negative mean (roundoff) clamps to zero counts
    CountMap fuzz = expected;
    fuzz.mean_rates[0] = -1.0e-15;
    const CountMap clamped = sample_counts(fuzz, 1);
    CHECK(clamped.counts[0] == 0.0);
    // a genuinely negative mean is an internal error
    fuzz.mean_rates[0] = -5.0;
    CHECK_THROWS_AS(sample_counts(fuzz, 1), std::runtime_error);
}

TEST_CASE("results are independent of the worker-thread count") {
    const EnsembleState st = tophat_state();
    const DetectorModel det = preset_detector();
    const InterferometerConfig cfg = preset_bench();
    const ScanConfig scan = small_scan(st.grid);

    setenv("SAGNAC_WIGNER_THREADS", "1", 1);
    const CountMap serial = run_scan(st, scan, det, cfg);
    setenv("SAGNAC_WIGNER_THREADS", "7", 1);
    const CountMap threaded = run_scan(st, scan, det, cfg);
    unsetenv("SAGNAC_WIGNER_THREADS");

    CHECK(serial.counts == threaded.counts);
    CHECK(serial.mean_rates == threaded.mean_rates);
}

TEST_CASE("run_scan honors the noiseless switch") {
    const EnsembleState st = tophat_state();
    const DetectorModel det = preset_detector();
    const InterferometerConfig cfg = preset_bench();
    ScanConfig scan = small_scan(st.grid);

    scan.noiseless = true;
    const CountMap clean = run_scan(st, scan, det, cfg);
    for (std::size_t idx = 0; idx < clean.counts.size(); ++idx) {
        CHECK(clean.counts[idx] == clean.mean_rates[idx] * scan.dwell);
    }

    scan.noiseless = false;
    const CountMap noisy = run_scan(st, scan, det, cfg);
    const CountMap manual = sample_counts(expected_count_map(st, scan, det, cfg), scan.seed);
    CHECK(noisy.counts == manual.counts);
}
