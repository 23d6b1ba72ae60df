#include "sagwig/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace sagwig {

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t i, std::uint64_t j) {
    std::uint64_t h = mix64(seed ^ 0xA0761D6478BD642Full);
    h = mix64(h ^ (i * 0xE7037ED1A0B428DBull + 0x8EBC6AF09C88C6E3ull));
    h = mix64(h ^ (j * 0x589965CC75374CC3ull + 0x1D8E4E27C47D124Full));
    return h;
}

long long poisson_sample(double mean, CounterRng& rng) {
    if (!(mean >= 0.0)) throw std::invalid_argument("poisson_sample: mean must be nonnegative");
    if (mean == 0.0) return 0;
    if (mean < 10.0) {
        // Knuth's product-of-uniforms method.
        const double limit = std::exp(-mean);
        long long k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= rng.next_unit();
        } while (p > limit);
        return k - 1;
    }
    // Hormann's PTRS transformed rejection.
    const double mu = mean;
    const double b = 0.931 + 2.53 * std::sqrt(mu);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mu = std::log(mu);
    for (;;) {
        const double u = rng.next_unit() - 0.5;
        const double v = rng.next_unit();
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mu + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<long long>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        const long long k = static_cast<long long>(kf);
        const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
        const double rhs = -mu + kf * log_mu - std::lgamma(kf + 1.0);
        if (lhs <= rhs) return k;
    }
}

}  // namespace sagwig
