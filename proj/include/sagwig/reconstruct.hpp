#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sagwig/scan.hpp"
#include "sagwig/wigner.hpp"

namespace sagwig {

enum class BackgroundMethod { Calibration, Plateau };

/// Constant background counts per pixel.
///  - Calibration: simulated blocked-arm runs of duration `calibration_time`
///    each — arm 1 only, arm 2 only (rates eta*flux/4 + dark), plus a
///    both-blocked dark run when dark_rate > 0 — combined so the estimate
///    targets the full constant term (n1 + n2 + dark) * dwell. Noiseless maps
///    use the exact rates; noisy maps Poisson-sample each run.
///  - Plateau: mean of the recorded counts over the raster's outer 10%
///    border frame (valid when the border lies outside the state's support).
double estimate_background(const CountMap& map, BackgroundMethod method,
                           double calibration_time = 2.0);

/// Geometric features of a Wigner map, read from its k~0 section (along x)
/// and from a section along k (taken at x~0, or at the right lobe centroid
/// for double slits so the section crosses a single aperture). The fringe
/// entries only apply to double-slit maps and stay empty otherwise.
struct FeatureSet {
    double support_width = 0.0;          // base width of the k~0 section [m]
    double first_zero_theta = 0.0;       // divergence candidate: first zero [rad]
    double full_width_theta = 0.0;       // divergence candidate: 5% full extent [rad]
    std::optional<double> lobe_separation;   // outer lobe centroid distance [m]
    std::optional<double> fringe_period_k;   // dominant k-period at x~0 [rad/m]
    std::optional<double> fringe_visibility; // (max-min)/(max+min), one central period
};

struct CompareMetrics {
    double l2_relative = 0.0;  // ||a - b||_2 / ||b||_2
    double pearson = 0.0;
    long peak_shift_x = 0;     // argmax displacement in grid steps
    long peak_shift_k = 0;
};

struct ReconstructionReport {
    WignerMap wigner;
    double background_counts = 0.0;  // per pixel, as subtracted
    double scale = 0.0;              // raw-map divisor; estimates eta*flux*dwell*pi/2
    double plateau_residual = 0.0;   // mean border W / peak |W|
    FeatureSet features;
    std::vector<std::string> warnings;
};

/// Inverts the forward model on a count map: W_raw = -(counts - background),
/// axes (x = realized mirror positions, k = k0 sin theta), normalized so the
/// raster integral is 1 (trapezoid measure; the divisor is recorded as
/// `scale`). A nonzero mean of W over the border frame is reported as
/// plateau_residual and flagged above 1% of the peak.
ReconstructionReport reconstruct_wigner(const CountMap& map, double background,
                                        const FieldSpec& field);

/// Feature extraction alone (used on analytic or transform maps too). The
/// field spec supplies the kind and, for double slits, the nominal separation
/// that fixes the one-period visibility window 2*pi/separation around k = 0
/// (the measured fringe period is reported separately); the wavelength maps
/// k onto tilt angles for the divergence candidates.
FeatureSet extract_features(const WignerMap& map, const FieldSpec& field, double wavelength);

/// Pointwise comparison of two maps on identical axes.
CompareMetrics compare_maps(const WignerMap& a, const WignerMap& b);

}  // namespace sagwig
