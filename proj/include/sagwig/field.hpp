#pragma once

#include <complex>
#include <span>
#include <vector>

#include "sagwig/grid.hpp"

namespace sagwig {

using cd = std::complex<double>;

/// One transverse optical mode sampled on a grid.
struct ComplexField {
    Grid grid;
    std::vector<cd> amplitude;
};

/// Finite convex mixture of pure modes sharing one grid. Represents the
/// two-point correlation <E(x1) E*(x2)> = sum_m w_m E_m(x1) E_m*(x2).
struct EnsembleState {
    Grid grid;
    std::vector<std::vector<cd>> modes;  // each of size grid.n, unit power
    std::vector<double> weights;         // nonnegative, sum to 1

    [[nodiscard]] std::size_t mode_count() const { return modes.size(); }
};

enum class FieldKind { TopHat, DoubleSlit, Gaussian, HermiteGauss };
enum class Coherence { Coherent, Incoherent };

/// Parameters for the built-in source fields. Meaning by kind:
///  - TopHat:       width (full slit width a), center
///  - DoubleSlit:   spacing (center-to-center d), slit_width (w), coherence
///  - Gaussian:     waist (sigma of the amplitude profile exp(-x^2/2 sigma^2))
///  - HermiteGauss: waist, order
struct FieldSpec {
    FieldKind kind = FieldKind::TopHat;
    double width = 0.0;
    double spacing = 0.0;
    double slit_width = 0.0;
    double waist = 0.0;
    int order = 0;
    Coherence coherence = Coherence::Coherent;
    double center = 0.0;
};

/// Construct the ensemble for a field spec. Hard slit edges land on grid
/// samples by nearest-sample rounding, so realized widths are quantized to
/// one grid step; every mode is normalized to unit power on the grid.
EnsembleState make_state(const FieldSpec& spec, const Grid& grid);

/// Convex mixture of ensembles on a common grid.
EnsembleState mix_states(std::span<const EnsembleState> states,
                         std::span<const double> weights);

/// <E(x1) E*(x2)> with x1, x2 snapped to the nearest grid samples.
cd correlation(const EnsembleState& state, double x1, double x2);

/// Total ensemble power sum_m w_m sum_i |E_m[i]|^2 * spacing.
double total_power(const EnsembleState& state);

/// Paraxial free-space propagation over distance z: every mode is multiplied
/// by exp(-i z k^2 / (2 k0)) on the grid's own discrete frequency axis, which
/// keeps the step exactly unitary and exactly composable in z. Errors out
/// when the propagated support would wrap the periodic window, estimated via
/// |z| * k_eff / k0 > extent / 4 with k_eff the 99%-power bandwidth.
EnsembleState fresnel_propagate(const EnsembleState& state, double z, double wavelength);

/// Smallest K with at least `fraction` of spectral power inside |k| <= K.
double effective_bandwidth(const EnsembleState& state, double fraction = 0.99);

namespace detail {
/// Normalize one mode to unit power in place; throws on zero power.
void normalize_mode(std::vector<cd>& a, double spacing);
}  // namespace detail

}  // namespace sagwig
