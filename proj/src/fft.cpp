#include "sagwig/fft.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace sagwig {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

/// Forward twiddle table exp(-2*pi*i*j/n), j < n/2, cached per size.
/// Entries come straight from std::polar, so every thread sees identical
/// values and no drift accumulates across butterfly stages.
const std::vector<cd>& twiddles(std::size_t n) {
    thread_local std::unordered_map<std::size_t, std::unique_ptr<std::vector<cd>>> cache;
    auto& slot = cache[n];
    if (!slot) {
        auto t = std::make_unique<std::vector<cd>>(n / 2);
        for (std::size_t j = 0; j < n / 2; ++j) {
            (*t)[j] = std::polar(1.0, -2.0 * kPi * static_cast<double>(j) / static_cast<double>(n));
        }
        slot = std::move(t);
    }
    return *slot;
}

}  // namespace

void fft_pow2(std::vector<cd>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0) return;
    if (!is_pow2(n)) throw std::invalid_argument("fft_pow2: size must be a power of two");
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const auto& tw = twiddles(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t step = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cd w = inverse ? std::conj(tw[j * step]) : tw[j * step];
                const cd u = a[i + j];
                const cd v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& z : a) z *= inv;
    }
}

namespace {

/// Bluestein kernel FFT for arbitrary-size DFTs, cached per (n, direction).
struct BluesteinPlan {
    std::size_t P = 0;
    std::vector<cd> chirp;       // exp(sign*pi*i*(j^2 mod 2n)/n)
    std::vector<cd> kernel_fft;  // FFT of wrapped conj-chirp
};

const BluesteinPlan& bluestein_plan(std::size_t n, bool inverse) {
    thread_local std::unordered_map<std::size_t, std::unique_ptr<BluesteinPlan>> cache[2];
    auto& slot = cache[inverse ? 1 : 0][n];
    if (!slot) {
        auto plan = std::make_unique<BluesteinPlan>();
        plan->P = next_pow2(2 * n - 1);
        plan->chirp.resize(n);
        const double sign = inverse ? 1.0 : -1.0;
        for (std::size_t j = 0; j < n; ++j) {
            const unsigned long long m2 = (static_cast<unsigned long long>(j) * j) % (2 * n);
            plan->chirp[j] = std::polar(1.0, sign * kPi * static_cast<double>(m2) / static_cast<double>(n));
        }
        std::vector<cd> b(plan->P, cd{0.0, 0.0});
        for (std::size_t m = 0; m < n; ++m) {
            const cd c = std::conj(plan->chirp[m]);
            b[m] = c;
            if (m != 0) b[plan->P - m] = c;
        }
        fft_pow2(b, false);
        plan->kernel_fft = std::move(b);
        slot = std::move(plan);
    }
    return *slot;
}

void bluestein_dft(std::vector<cd>& a, bool inverse) {
    const std::size_t n = a.size();
    const auto& plan = bluestein_plan(n, inverse);
    std::vector<cd> h(plan.P, cd{0.0, 0.0});
    for (std::size_t j = 0; j < n; ++j) h[j] = a[j] * plan.chirp[j];
    fft_pow2(h, false);
    for (std::size_t i = 0; i < plan.P; ++i) h[i] *= plan.kernel_fft[i];
    fft_pow2(h, true);
    for (std::size_t l = 0; l < n; ++l) a[l] = h[l] * plan.chirp[l];
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& z : a) z *= inv;
    }
}

}  // namespace

void dft(std::vector<cd>& a, bool inverse) {
    if (a.empty()) return;
    if (is_pow2(a.size())) {
        fft_pow2(a, inverse);
    } else {
        bluestein_dft(a, inverse);
    }
}

ChirpPlan::ChirpPlan(std::size_t M, std::size_t n_out, double dphi)
    : M_(M), n_out_(n_out), dphi_(dphi) {
    if (M == 0 || n_out == 0) throw std::invalid_argument("ChirpPlan: empty transform");
    P_ = next_pow2(M + n_out - 1);
    const std::size_t nc = std::max(M, n_out);
    chirp_.resize(nc);
    for (std::size_t m = 0; m < nc; ++m) {
        // m <= 2^26 here, so m*m is exact in double.
        const double m2 = static_cast<double>(m) * static_cast<double>(m);
        chirp_[m] = std::polar(1.0, 0.5 * dphi * m2);
    }
    std::vector<cd> b(P_, cd{0.0, 0.0});
    for (std::size_t m = 0; m < n_out; ++m) b[m] = std::conj(chirp_[m]);
    for (std::size_t m = 1; m < M; ++m) b[P_ - m] = std::conj(chirp_[m]);
    fft_pow2(b, false);
    kernel_fft_ = std::move(b);
}

std::vector<cd> ChirpPlan::evaluate(const std::vector<cd>& g, double phi0) const {
    if (g.size() != M_) throw std::invalid_argument("ChirpPlan: input size mismatch");
    std::vector<cd> h(P_, cd{0.0, 0.0});
    for (std::size_t j = 0; j < M_; ++j) {
        h[j] = g[j] * std::polar(1.0, phi0 * static_cast<double>(j)) * chirp_[j];
    }
    fft_pow2(h, false);
    for (std::size_t i = 0; i < P_; ++i) h[i] *= kernel_fft_[i];
    fft_pow2(h, true);
    std::vector<cd> out(n_out_);
    for (std::size_t l = 0; l < n_out_; ++l) out[l] = h[l] * chirp_[l];
    return out;
}

}  // namespace sagwig
