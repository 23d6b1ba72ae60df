#include "sagwig/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "sagwig/fft.hpp"

namespace sagwig {

namespace {

constexpr double kPi = std::numbers::pi;

void check_grid(const Grid& g) {
    if (g.n < 2) throw std::invalid_argument("field: grid needs at least 2 samples");
    if (!(g.spacing > 0.0) || !std::isfinite(g.spacing)) {
        throw std::invalid_argument("field: grid spacing must be positive");
    }
    if (!std::isfinite(g.center)) throw std::invalid_argument("field: grid center must be finite");
}

void check_support(const Grid& g, double lo, double hi, const char* what) {
    if (lo < g.min_x() || hi > g.max_x()) {
        std::ostringstream os;
        os << "field: " << what << " support [" << lo << ", " << hi
           << "] exceeds the grid span [" << g.min_x() << ", " << g.max_x() << "]";
        throw std::invalid_argument(os.str());
    }
}

/// Samples with |x - center| <= half_width, with a relative fuzz of one part
/// in 1e9 of a step so edges exactly midway between samples stay stable.
std::vector<int> slit_samples(const Grid& g, double center, double half_width) {
    std::vector<int> idx;
    const double fuzz = 1e-9 * g.spacing;
    for (int i = 0; i < g.n; ++i) {
        if (std::abs(g.position(i) - center) <= half_width + fuzz) idx.push_back(i);
    }
    return idx;
}

void require_resolved(std::size_t samples, const char* what) {
    if (samples < 4) {
        std::ostringstream os;
        os << "field: " << what << " covers fewer than 4 grid samples; refine the grid";
        throw std::invalid_argument(os.str());
    }
}

double hermite_poly(int order, double t) {
    double hm1 = 0.0, h = 1.0;  // H_0
    for (int m = 0; m < order; ++m) {
        const double hp = 2.0 * t * h - 2.0 * static_cast<double>(m) * hm1;
        hm1 = h;
        h = hp;
    }
    return h;
}

}  // namespace

namespace detail {

void normalize_mode(std::vector<cd>& a, double spacing) {
    double p = 0.0;
    for (const cd& z : a) p += std::norm(z);
    p *= spacing;
    if (!(p > 0.0) || !std::isfinite(p)) {
        throw std::invalid_argument("field: mode has zero (or non-finite) power on the grid");
    }
    const double s = 1.0 / std::sqrt(p);
    for (cd& z : a) z *= s;
}

}  // namespace detail

EnsembleState make_state(const FieldSpec& spec, const Grid& grid) {
    check_grid(grid);
    EnsembleState state;
    state.grid = grid;

    switch (spec.kind) {
        case FieldKind::TopHat: {
            const double a = spec.width;
            if (!(a > 0.0)) throw std::invalid_argument("field: top-hat width must be positive");
            check_support(grid, spec.center - 0.5 * a, spec.center + 0.5 * a, "top-hat");
            const auto idx = slit_samples(grid, spec.center, 0.5 * a);
            require_resolved(idx.size(), "top-hat aperture");
            std::vector<cd> mode(static_cast<std::size_t>(grid.n), cd{0.0, 0.0});
            const double amp = 1.0 / std::sqrt(a);
            for (int i : idx) mode[static_cast<std::size_t>(i)] = amp;
            detail::normalize_mode(mode, grid.spacing);
            state.modes.push_back(std::move(mode));
            state.weights.push_back(1.0);
            break;
        }
        case FieldKind::DoubleSlit: {
            const double d = spec.spacing;
            const double w = spec.slit_width;
            if (!(w > 0.0)) throw std::invalid_argument("field: slit width must be positive");
            if (!(d > w)) {
                throw std::invalid_argument("field: slit separation must exceed the slit width");
            }
            check_support(grid, spec.center - 0.5 * (d + w), spec.center + 0.5 * (d + w),
                          "double-slit");
            const auto left = slit_samples(grid, spec.center - 0.5 * d, 0.5 * w);
            const auto right = slit_samples(grid, spec.center + 0.5 * d, 0.5 * w);
            require_resolved(left.size(), "double-slit aperture");
            require_resolved(right.size(), "double-slit aperture");
            if (spec.coherence == Coherence::Coherent) {
                std::vector<cd> mode(static_cast<std::size_t>(grid.n), cd{0.0, 0.0});
                const double amp = 1.0 / std::sqrt(2.0 * w);
                for (int i : left) mode[static_cast<std::size_t>(i)] = amp;
                for (int i : right) mode[static_cast<std::size_t>(i)] = amp;
                detail::normalize_mode(mode, grid.spacing);
                state.modes.push_back(std::move(mode));
                state.weights.push_back(1.0);
            } else {
                for (const auto* slit : {&left, &right}) {
                    std::vector<cd> mode(static_cast<std::size_t>(grid.n), cd{0.0, 0.0});
                    const double amp = 1.0 / std::sqrt(w);
                    for (int i : *slit) mode[static_cast<std::size_t>(i)] = amp;
                    detail::normalize_mode(mode, grid.spacing);
                    state.modes.push_back(std::move(mode));
                    state.weights.push_back(0.5);
                }
            }
            break;
        }
        case FieldKind::Gaussian:
        case FieldKind::HermiteGauss: {
            const double sigma = spec.waist;
            if (!(sigma > 0.0)) throw std::invalid_argument("field: waist must be positive");
            if (sigma < 2.0 * grid.spacing) {
                throw std::invalid_argument(
                    "field: waist below two grid steps is unresolved; refine the grid");
            }
            int order = 0;
            if (spec.kind == FieldKind::HermiteGauss) {
                order = spec.order;
                if (order < 0 || order > 20) {
                    throw std::invalid_argument("field: mode order must be in [0, 20]");
                }
            }
            const double reach = (std::sqrt(2.0 * order + 1.0) + 6.0) * sigma;
            check_support(grid, spec.center - reach, spec.center + reach, "gaussian");
            std::vector<cd> mode(static_cast<std::size_t>(grid.n));
            for (int i = 0; i < grid.n; ++i) {
                const double t = (grid.position(i) - spec.center) / sigma;
                double v = std::exp(-0.5 * t * t);
                if (order > 0) v *= hermite_poly(order, t);
                mode[static_cast<std::size_t>(i)] = v;
            }
            detail::normalize_mode(mode, grid.spacing);
            state.modes.push_back(std::move(mode));
            state.weights.push_back(1.0);
            break;
        }
    }
    return state;
}

EnsembleState mix_states(std::span<const EnsembleState> states,
                         std::span<const double> weights) {
    if (states.empty()) throw std::invalid_argument("mix_states: no input states");
    if (states.size() != weights.size()) {
        throw std::invalid_argument("mix_states: one weight per state required");
    }
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw std::invalid_argument("mix_states: weights must be nonnegative");
        }
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("mix_states: weights must sum to 1 within 1e-9");
    }
    EnsembleState out;
    out.grid = states[0].grid;
    for (std::size_t s = 0; s < states.size(); ++s) {
        if (!same_grid(states[s].grid, out.grid)) {
            throw std::invalid_argument("mix_states: states must share one grid");
        }
        for (std::size_t m = 0; m < states[s].mode_count(); ++m) {
            out.modes.push_back(states[s].modes[m]);
            out.weights.push_back(weights[s] / sum * states[s].weights[m]);
        }
    }
    return out;
}

cd correlation(const EnsembleState& state, double x1, double x2) {
    const std::size_t i1 = static_cast<std::size_t>(state.grid.nearest_index(x1));
    const std::size_t i2 = static_cast<std::size_t>(state.grid.nearest_index(x2));
    cd acc{0.0, 0.0};
    for (std::size_t m = 0; m < state.mode_count(); ++m) {
        acc += state.weights[m] * state.modes[m][i1] * std::conj(state.modes[m][i2]);
    }
    return acc;
}

double total_power(const EnsembleState& state) {
    double p = 0.0;
    for (std::size_t m = 0; m < state.mode_count(); ++m) {
        double pm = 0.0;
        for (const cd& z : state.modes[m]) pm += std::norm(z);
        p += state.weights[m] * pm;
    }
    return p * state.grid.spacing;
}

double effective_bandwidth(const EnsembleState& state, double fraction) {
    if (!(fraction > 0.0) || !(fraction <= 1.0)) {
        throw std::invalid_argument("effective_bandwidth: fraction must be in (0, 1]");
    }
    const std::size_t n = static_cast<std::size_t>(state.grid.n);
    std::vector<double> power(n, 0.0);
    for (std::size_t m = 0; m < state.mode_count(); ++m) {
        std::vector<cd> spec = state.modes[m];
        dft(spec, false);
        for (std::size_t l = 0; l < n; ++l) power[l] += state.weights[m] * std::norm(spec[l]);
    }
    std::vector<double> absk(n);
    const double dk = 2.0 * kPi / (static_cast<double>(state.grid.n) * state.grid.spacing);
    for (std::size_t l = 0; l < n; ++l) {
        const long long m = (l <= n / 2) ? static_cast<long long>(l)
                                         : static_cast<long long>(l) - static_cast<long long>(n);
        absk[l] = std::abs(static_cast<double>(m)) * dk;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return absk[a] < absk[b]; });
    const double total = std::accumulate(power.begin(), power.end(), 0.0);
    if (!(total > 0.0)) throw std::invalid_argument("effective_bandwidth: zero-power state");
    double cum = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        cum += power[order[r]];
        if (cum >= fraction * total) return absk[order[r]];
    }
    return absk[order[n - 1]];
}

EnsembleState fresnel_propagate(const EnsembleState& state, double z, double wavelength) {
    if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
        throw std::invalid_argument("fresnel_propagate: wavelength must be positive");
    }
    if (!std::isfinite(z)) throw std::invalid_argument("fresnel_propagate: distance must be finite");
    check_grid(state.grid);
    const double k0 = 2.0 * kPi / wavelength;
    if (kPi / state.grid.spacing > 0.5 * k0) {
        throw std::invalid_argument(
            "fresnel_propagate: grid carries spatial frequencies beyond the paraxial band");
    }
    if (z == 0.0) return state;

    const double k_eff = effective_bandwidth(state, 0.99);
    const double shear = std::abs(z) * k_eff / k0;
    if (shear > 0.25 * state.grid.extent()) {
        std::ostringstream os;
        os << "fresnel_propagate: propagated support would wrap the periodic window "
           << "(estimated transverse spread " << shear << " m exceeds a quarter of the "
           << state.grid.extent() << " m span); enlarge the grid or shorten the distance";
        throw std::runtime_error(os.str());
    }

    const std::size_t n = static_cast<std::size_t>(state.grid.n);
    const double dk = 2.0 * kPi / (static_cast<double>(state.grid.n) * state.grid.spacing);
    std::vector<cd> transfer(n);
    for (std::size_t l = 0; l < n; ++l) {
        const long long m = (l <= n / 2) ? static_cast<long long>(l)
                                         : static_cast<long long>(l) - static_cast<long long>(n);
        const double k = static_cast<double>(m) * dk;
        transfer[l] = std::polar(1.0, -z * k * k / (2.0 * k0));
    }

    EnsembleState out;
    out.grid = state.grid;
    out.weights = state.weights;
    out.modes.reserve(state.mode_count());
    for (std::size_t m = 0; m < state.mode_count(); ++m) {
        std::vector<cd> a = state.modes[m];
        dft(a, false);
        for (std::size_t l = 0; l < n; ++l) a[l] *= transfer[l];
        dft(a, true);
        out.modes.push_back(std::move(a));
    }
    return out;
}

}  // namespace sagwig
