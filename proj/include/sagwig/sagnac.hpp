#pragma once

#include <complex>
#include <vector>

#include "sagwig/field.hpp"

namespace sagwig {

/// Steering-mirror setting: transverse shift [m] and tilt angle [rad].
struct MirrorSetting {
    double x_shift = 0.0;
    double theta = 0.0;
};

/// Detector non-uniformity across the beam cross-section. `Constant` is the
/// ideal photocathode; `LinearGradient` falls linearly from 1 at the low-x
/// edge of the field grid to `min_value` at the high-x edge (sensitivity
/// studies for photocathode uniformity specs).
struct UniformityProfile {
    enum class Kind { Constant, LinearGradient };
    Kind kind = Kind::Constant;
    double min_value = 1.0;

    [[nodiscard]] double at(double x, double x_lo, double x_hi) const {
        if (kind == Kind::Constant) return 1.0;
        const double t = (x - x_lo) / (x_hi - x_lo);
        return 1.0 + (min_value - 1.0) * t;
    }
    [[nodiscard]] bool is_constant() const { return kind == Kind::Constant; }
};

/// Photon-counting detection chain: overall efficiency, source photon flux
/// [photons/s] entering the interferometer, and dark-count rate [counts/s].
struct DetectorModel {
    double eta = 0.11;
    double photon_flux = 0.0;
    double dark_rate = 0.0;
    UniformityProfile uniformity{};
};

/// Optical bench constants. `na_limit` bounds |sin theta| of the steering
/// mirror (collection numerical aperture).
struct InterferometerConfig {
    double wavelength = 633e-9;
    double na_limit = 0.09;
};

/// Mean singles/coincidence-free rates [counts/s] at one mirror setting:
/// the two single-arm contributions and the interference cross term.
struct RateTriple {
    double n1 = 0.0;
    double n2 = 0.0;
    double n12 = 0.0;
    double total = 0.0;
};

/// k = k0 * sin(theta), k0 = 2*pi/wavelength. Throws for |theta| >= pi/2.
double tilt_to_wavevector(double theta, double wavelength);
double wavevector_to_tilt(double k, double wavelength);

/// Nearest-sample quantization of a requested shift: number of grid steps.
int shift_samples(const Grid& grid, double x_shift);

/// Phase-space displacement by (x, k): E(u) -> E(u - x) * exp(i k u), with
/// the spatial shift realized as a nearest-sample roll (x quantized to the
/// grid step). Throws when the shifted support would leave the grid or when
/// |k| >= pi/spacing (not representable).
EnsembleState displace_by(const EnsembleState& state, double x, double k);

/// Mirror-setting displacement with NA enforcement.
EnsembleState displace_state(const EnsembleState& state, const MirrorSetting& s,
                             const InterferometerConfig& cfg);

/// Spatial inversion about the phase-space origin: every mode reversed about
/// x = 0 by the index map i -> (n - i) mod n. Requires an origin-centered
/// grid (|center| ~ 0), else the reflected samples fall between grid points.
EnsembleState parity_reflect(const EnsembleState& state);

/// sum_m w_m sum_i E_m[i] * conj(E_m[(n-i) mod n]) * spacing — the overlap of
/// each mode with its parity image. Guaranteed real up to rounding; shared by
/// the interference rate and the displaced-parity Wigner evaluation so the
/// two agree bit-for-bit.
cd parity_overlap(const EnsembleState& state);

/// Mean count rates at one mirror setting. The beam is displaced by the
/// *inverse* setting (-x_shift, -k) and interfered with its parity image, so
/// the cross term probes the Wigner function exactly at (x_shift, k0 sin
/// theta): n1 = n2 = eta*flux/4 (independent of the setting), and
/// n12 = -(eta*flux/2) * Re sum_m w_m Int E_m(x') E_m*(-x') dx' of the
/// displaced beam = -eta*flux*(pi/2) * W(x_shift, k0 sin theta).
/// Computed from the overlap integral directly, never from a Wigner map.
RateTriple interfere(const EnsembleState& state, const MirrorSetting& s,
                     const DetectorModel& det, const InterferometerConfig& cfg);

/// Square 2D complex array (row-major; index convention matches the 1D grid:
/// coordinate x_i = (i - n/2) * step along each axis).
struct Field2D {
    int n = 0;
    std::vector<cd> a;  // a[ix * n + iy]

    [[nodiscard]] cd& at(int ix, int iy) { return a[static_cast<std::size_t>(ix) * n + iy]; }
    [[nodiscard]] const cd& at(int ix, int iy) const {
        return a[static_cast<std::size_t>(ix) * n + iy];
    }
};

enum class RotationSense { CW, CCW };

/// Image rotation performed by the in-plane Sagnac mirrors on a wavefront:
/// CW maps E(x,y) -> E(y,x); CCW maps E(x,y) -> E(-y,-x). Composing the two
/// (one per circulation direction) yields the relative point reflection
/// E(x,y) -> E(-x,-y) between the counter-propagating beams.
Field2D rotate_wavefront_90(const Field2D& f, RotationSense sense);

}  // namespace sagwig
