#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "sagwig/fft.hpp"

using namespace sagwig;

namespace {

constexpr double kPi = std::numbers::pi;

/// Reference O(n^2) DFT with the library's kernel conventions.
std::vector<cd> brute_dft(const std::vector<cd>& a, bool inverse) {
    const std::size_t n = a.size();
    std::vector<cd> out(n, cd{0.0, 0.0});
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t l = 0; l < n; ++l) {
        cd acc{0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) {
            acc += a[j] * std::polar(1.0, sign * 2.0 * kPi *
                                              static_cast<double>(l * j % n) /
                                              static_cast<double>(n));
        }
        out[l] = inverse ? acc / static_cast<double>(n) : acc;
    }
    return out;
}

/// Deterministic pseudo-random test vector (fixed linear congruence).
std::vector<cd> test_vector(std::size_t n, unsigned seed) {
    std::vector<cd> a(n);
    unsigned s = seed * 2654435761u + 1u;
    for (std::size_t j = 0; j < n; ++j) {
        s = s * 1664525u + 1013904223u;
        const double re = static_cast<double>(s >> 8) / 16777216.0 - 0.5;
        s = s * 1664525u + 1013904223u;
        const double im = static_cast<double>(s >> 8) / 16777216.0 - 0.5;
        a[j] = cd{re, im};
    }
    return a;
}

double max_abs_diff(const std::vector<cd>& a, const std::vector<cd>& b) {
    REQUIRE(a.size() == b.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("power-of-two FFT matches the brute-force DFT") {
    const auto a = test_vector(16, 7);
    std::vector<cd> fast = a;
    fft_pow2(fast, false);
    CHECK(max_abs_diff(fast, brute_dft(a, false)) < 1e-12);

    std::vector<cd> back = fast;
    fft_pow2(back, true);
    CHECK(max_abs_diff(back, a) < 1e-13);
}

TEST_CASE("FFT preserves the Parseval sum") {
    const auto a = test_vector(256, 3);
    double time_power = 0.0;
    for (const cd& z : a) time_power += std::norm(z);
    std::vector<cd> f = a;
    fft_pow2(f, false);
    double freq_power = 0.0;
    for (const cd& z : f) freq_power += std::norm(z);
    CHECK(freq_power / 256.0 == doctest::Approx(time_power).epsilon(1e-12));
}

TEST_CASE("arbitrary-length DFT matches the brute-force DFT") {
    for (const std::size_t n : {std::size_t{12}, std::size_t{101}, std::size_t{1}}) {
        const auto a = test_vector(n, static_cast<unsigned>(n));
        std::vector<cd> fast = a;
        dft(fast, false);
        CHECK(max_abs_diff(fast, brute_dft(a, false)) < 1e-10);

        std::vector<cd> back = fast;
        dft(back, true);
        CHECK(max_abs_diff(back, a) < 1e-11);
    }
}

TEST_CASE("chirp transform evaluates an arbitrary uniform-frequency sweep") {
    const std::size_t M = 37, n_out = 25;
    const double dphi = 0.0371, phi0 = -1.3;
    const auto g = test_vector(M, 11);

    const ChirpPlan plan(M, n_out, dphi);
    CHECK(plan.input_size() == M);
    CHECK(plan.output_size() == n_out);
    const auto fast = plan.evaluate(g, phi0);
    REQUIRE(fast.size() == n_out);

    for (std::size_t l = 0; l < n_out; ++l) {
        cd acc{0.0, 0.0};
        const double w = phi0 + static_cast<double>(l) * dphi;
        for (std::size_t j = 0; j < M; ++j) {
            acc += g[j] * std::polar(1.0, w * static_cast<double>(j));
        }
        CHECK(std::abs(fast[l] - acc) < 1e-10);
    }
}

TEST_CASE("chirp transform reduces to the DFT on matching parameters") {
    // dphi = -2*pi/M, phi0 = 0 reproduces the forward DFT of length M
    const std::size_t M = 24;
    const auto g = test_vector(M, 5);
    const ChirpPlan plan(M, M, -2.0 * kPi / static_cast<double>(M));
    const auto fast = plan.evaluate(g, 0.0);
    const auto ref = brute_dft(g, false);
    CHECK(max_abs_diff(fast, ref) < 1e-11);
}

TEST_CASE("transforms are bitwise deterministic across calls") {
    const auto a = test_vector(101, 2);
    std::vector<cd> f1 = a, f2 = a;
    dft(f1, false);
    dft(f2, false);
    CHECK(f1 == f2);

    const ChirpPlan p1(37, 25, 0.0371), p2(37, 25, 0.0371);
    const auto g = test_vector(37, 11);
    CHECK(p1.evaluate(g, -1.3) == p2.evaluate(g, -1.3));
}
