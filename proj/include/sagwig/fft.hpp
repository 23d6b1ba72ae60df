#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace sagwig {

using cd = std::complex<double>;

/// In-place radix-2 FFT. n must be a power of two. Forward kernel
/// exp(-2*pi*i*jk/n); the inverse divides by n.
void fft_pow2(std::vector<cd>& a, bool inverse);

/// DFT for arbitrary n (radix-2 when possible, Bluestein otherwise).
/// Same kernel and normalization conventions as fft_pow2.
void dft(std::vector<cd>& a, bool inverse);

/// Evaluates S_l = sum_{j=0}^{M-1} g[j] * exp(i*(phi0 + l*dphi)*j) for
/// l = 0..n_out-1 via Bluestein's chirp factorization: a uniform-frequency
/// transform at arbitrary start/step, costing three power-of-two FFTs.
/// The kernel-FFT part depends only on (M, n_out, dphi) and is precomputed
/// in the plan so row batches can share it.
class ChirpPlan {
public:
    ChirpPlan(std::size_t M, std::size_t n_out, double dphi);
    [[nodiscard]] std::vector<cd> evaluate(const std::vector<cd>& g, double phi0) const;
    [[nodiscard]] std::size_t input_size() const { return M_; }
    [[nodiscard]] std::size_t output_size() const { return n_out_; }

private:
    std::size_t M_;
    std::size_t n_out_;
    double dphi_;
    std::size_t P_;                 // padded FFT size
    std::vector<cd> chirp_;         // exp(+i*dphi*m^2/2), m = 0..max(M,n_out)-1
    std::vector<cd> kernel_fft_;    // FFT of exp(-i*dphi*m^2/2) wrapped kernel
};

}  // namespace sagwig
