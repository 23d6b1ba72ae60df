#include "sagwig/sagnac.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace sagwig {

namespace {

constexpr double kPi = std::numbers::pi;

/// Pooled support of an ensemble: smallest index window holding every sample
/// whose magnitude exceeds 1e-13 of the ensemble peak. Returns {lo, hi}
/// inclusive; {n, -1} for an all-zero state (treated as empty support).
std::pair<int, int> pooled_support(const EnsembleState& state) {
    double peak = 0.0;
    for (const auto& mode : state.modes) {
        for (const cd& z : mode) peak = std::max(peak, std::abs(z));
    }
    const double tol = 1e-13 * peak;
    int lo = state.grid.n, hi = -1;
    for (const auto& mode : state.modes) {
        for (int i = 0; i < state.grid.n; ++i) {
            if (std::abs(mode[static_cast<std::size_t>(i)]) > tol) {
                lo = std::min(lo, i);
                hi = std::max(hi, i);
            }
        }
    }
    return {lo, hi};
}

}  // namespace

double tilt_to_wavevector(double theta, double wavelength) {
    if (!(wavelength > 0.0)) throw std::invalid_argument("tilt: wavelength must be positive");
    if (!(std::abs(theta) < 0.5 * kPi)) {
        throw std::invalid_argument("tilt: |theta| must be below pi/2");
    }
    return 2.0 * kPi / wavelength * std::sin(theta);
}

double wavevector_to_tilt(double k, double wavelength) {
    if (!(wavelength > 0.0)) throw std::invalid_argument("tilt: wavelength must be positive");
    const double k0 = 2.0 * kPi / wavelength;
    if (!(std::abs(k) <= k0)) {
        throw std::invalid_argument("tilt: |k| exceeds the free-space wavenumber");
    }
    return std::asin(k / k0);
}

int shift_samples(const Grid& grid, double x_shift) {
    if (!(grid.spacing > 0.0)) throw std::invalid_argument("shift: grid spacing must be positive");
    const double steps = x_shift / grid.spacing;
    if (!(std::abs(steps) < 1e9)) throw std::invalid_argument("shift: request out of range");
    return static_cast<int>(std::lround(steps));
}

EnsembleState displace_by(const EnsembleState& state, double x, double k) {
    const Grid& g = state.grid;
    if (!(std::abs(k) < kPi / g.spacing)) {
        throw std::invalid_argument(
            "displace: |k| reaches the grid band edge pi/spacing; refine the grid");
    }
    const int s = shift_samples(g, x);
    const auto [lo, hi] = pooled_support(state);
    if (hi >= lo) {  // non-empty support
        if (lo + s < 0 || hi + s >= g.n) {
            std::ostringstream os;
            os << "displace: shifted support would leave the grid (shift " << s
               << " steps, support samples [" << lo << ", " << hi << "] of " << g.n << ")";
            throw std::runtime_error(os.str());
        }
    }
    EnsembleState out;
    out.grid = g;
    out.weights = state.weights;
    out.modes.reserve(state.mode_count());
    const std::size_t n = static_cast<std::size_t>(g.n);
    std::vector<cd> ramp(n);
    for (int i = 0; i < g.n; ++i) {
        ramp[static_cast<std::size_t>(i)] = std::polar(1.0, k * g.position(i));
    }
    for (const auto& mode : state.modes) {
        std::vector<cd> b(n, cd{0.0, 0.0});
        for (int i = 0; i < g.n; ++i) {
            const int j = i - s;
            if (j >= 0 && j < g.n) {
                b[static_cast<std::size_t>(i)] =
                    mode[static_cast<std::size_t>(j)] * ramp[static_cast<std::size_t>(i)];
            }
        }
        out.modes.push_back(std::move(b));
    }
    return out;
}

EnsembleState displace_state(const EnsembleState& state, const MirrorSetting& s,
                             const InterferometerConfig& cfg) {
    if (!(std::abs(std::sin(s.theta)) <= cfg.na_limit * (1.0 + 1e-12))) {
        std::ostringstream os;
        os << "mirror tilt " << s.theta << " rad exceeds the collection aperture (|sin theta| <= "
           << cfg.na_limit << ")";
        throw std::invalid_argument(os.str());
    }
    const double k = tilt_to_wavevector(s.theta, cfg.wavelength);
    return displace_by(state, s.x_shift, k);
}

EnsembleState parity_reflect(const EnsembleState& state) {
    const Grid& g = state.grid;
    if (std::abs(g.center) > 1e-9 * std::max(g.extent(), std::abs(g.center))) {
        throw std::invalid_argument("parity_reflect: grid must be centered on the origin");
    }
    EnsembleState out;
    out.grid = g;
    out.weights = state.weights;
    out.modes.reserve(state.mode_count());
    const std::size_t n = static_cast<std::size_t>(g.n);
    for (const auto& mode : state.modes) {
        std::vector<cd> b(n);
        for (std::size_t i = 0; i < n; ++i) b[i] = mode[(n - i) % n];
        out.modes.push_back(std::move(b));
    }
    return out;
}

cd parity_overlap(const EnsembleState& state) {
    const Grid& g = state.grid;
    if (std::abs(g.center) > 1e-9 * std::max(g.extent(), std::abs(g.center))) {
        throw std::invalid_argument("parity_overlap: grid must be centered on the origin");
    }
    const std::size_t n = static_cast<std::size_t>(g.n);
    cd acc{0.0, 0.0};
    for (std::size_t m = 0; m < state.mode_count(); ++m) {
        const auto& mode = state.modes[m];
        cd s{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) s += mode[i] * std::conj(mode[(n - i) % n]);
        acc += state.weights[m] * s;
    }
    return acc * g.spacing;
}

RateTriple interfere(const EnsembleState& state, const MirrorSetting& s,
                     const DetectorModel& det, const InterferometerConfig& cfg) {
    if (!(det.eta > 0.0) || !(det.eta <= 1.0)) {
        throw std::invalid_argument("interfere: efficiency must be in (0, 1]");
    }
    if (!(det.photon_flux >= 0.0)) {
        throw std::invalid_argument("interfere: photon flux must be nonnegative");
    }
    if (!(std::abs(std::sin(s.theta)) <= cfg.na_limit * (1.0 + 1e-12))) {
        std::ostringstream os;
        os << "interfere: mirror tilt " << s.theta
           << " rad exceeds the collection aperture (|sin theta| <= " << cfg.na_limit << ")";
        throw std::invalid_argument(os.str());
    }
    const double k = tilt_to_wavevector(s.theta, cfg.wavelength);
    // Displace by the inverse setting so the probed phase-space point is
    // exactly (x_shift, k0 sin theta).
    const EnsembleState displaced = displace_by(state, -s.x_shift, -k);

    const Grid& g = state.grid;
    const double quarter = 0.25 * det.eta * det.photon_flux;
    RateTriple r;
    if (det.uniformity.is_constant()) {
        // Arm powers are conserved by the displacement (pure roll + phase
        // ramp), so both singles rates come from the input-state power and
        // are exactly independent of the mirror setting.
        const double p = total_power(state);
        r.n1 = quarter * p;
        r.n2 = r.n1;
        r.n12 = -2.0 * quarter * std::real(parity_overlap(displaced));
    } else {
        const double x_lo = g.min_x();
        const double x_hi = g.max_x();
        const std::size_t n = static_cast<std::size_t>(g.n);
        std::vector<double> u(n);
        for (std::size_t i = 0; i < n; ++i) {
            u[i] = det.uniformity.at(g.position(static_cast<int>(i)), x_lo, x_hi);
        }
        double p1 = 0.0, p2 = 0.0;
        cd overlap{0.0, 0.0};
        for (std::size_t m = 0; m < displaced.mode_count(); ++m) {
            const auto& mode = displaced.modes[m];
            double a1 = 0.0, a2 = 0.0;
            cd o{0.0, 0.0};
            for (std::size_t i = 0; i < n; ++i) {
                const cd rev = mode[(n - i) % n];
                a1 += u[i] * std::norm(mode[i]);
                a2 += u[i] * std::norm(rev);
                o += u[i] * mode[i] * std::conj(rev);
            }
            p1 += displaced.weights[m] * a1;
            p2 += displaced.weights[m] * a2;
            overlap += displaced.weights[m] * o;
        }
        r.n1 = quarter * p1 * g.spacing;
        r.n2 = quarter * p2 * g.spacing;
        r.n12 = -2.0 * quarter * std::real(overlap * g.spacing);
    }
    r.total = r.n1 + r.n2 + r.n12;
    if (r.total < -1e-9 * std::max(1.0, det.eta * det.photon_flux)) {
        throw std::runtime_error("interfere: negative total rate (internal inconsistency)");
    }
    return r;
}

Field2D rotate_wavefront_90(const Field2D& f, RotationSense sense) {
    if (f.n < 1 || f.a.size() != static_cast<std::size_t>(f.n) * static_cast<std::size_t>(f.n)) {
        throw std::invalid_argument("rotate_wavefront_90: array must be square n*n");
    }
    Field2D out;
    out.n = f.n;
    out.a.resize(f.a.size());
    const int n = f.n;
    for (int ix = 0; ix < n; ++ix) {
        for (int iy = 0; iy < n; ++iy) {
            if (sense == RotationSense::CW) {
                out.at(ix, iy) = f.at(iy, ix);
            } else {
                out.at(ix, iy) = f.at((n - iy) % n, (n - ix) % n);
            }
        }
    }
    return out;
}

}  // namespace sagwig
