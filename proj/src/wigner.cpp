#include "sagwig/wigner.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sagwig/fft.hpp"
#include "sagwig/parallel.hpp"
#include "sagwig/sagnac.hpp"

namespace sagwig {

namespace {

constexpr double kPi = std::numbers::pi;

/// Correlation row g_i(j) = sum_m w_m E_m[i+j] conj(E_m[i-j]) for
/// j in [-(n-1), n-1], packed as g[j + (n-1)]. Entries with either index off
/// the grid are zero.
std::vector<cd> correlation_row(const EnsembleState& state, int i) {
    const int n = state.grid.n;
    const int J = n - 1;
    std::vector<cd> g(static_cast<std::size_t>(2 * n - 1), cd{0.0, 0.0});
    const int jmax = std::min(i, n - 1 - i);
    for (int j = -jmax; j <= jmax; ++j) {
        cd acc{0.0, 0.0};
        for (std::size_t m = 0; m < state.mode_count(); ++m) {
            acc += state.weights[m] * state.modes[m][static_cast<std::size_t>(i + j)] *
                   std::conj(state.modes[m][static_cast<std::size_t>(i - j)]);
        }
        g[static_cast<std::size_t>(j + J)] = acc;
    }
    return g;
}

/// Direct quadrature of one row at one k. Uses the Hermitian pairing
/// g(-j) = conj(g(j)), so the result is exactly real; the rotating phasor is
/// re-synchronized from std::polar every 256 steps to keep drift ~1e-13.
double direct_row_value(const EnsembleState& state, int i, double k) {
    const int n = state.grid.n;
    const double step = state.grid.spacing;
    const int jmax = std::min(i, n - 1 - i);
    const std::size_t nm = state.mode_count();

    double g0 = 0.0;
    for (std::size_t m = 0; m < nm; ++m) {
        g0 += state.weights[m] * std::norm(state.modes[m][static_cast<std::size_t>(i)]);
    }
    double sum = g0;
    const cd rot = std::polar(1.0, -2.0 * k * step);
    cd phase{1.0, 0.0};
    for (int j = 1; j <= jmax; ++j) {
        if (j % 256 == 0) {
            phase = std::polar(1.0, -2.0 * k * step * static_cast<double>(j));
        } else {
            phase *= rot;
        }
        cd g{0.0, 0.0};
        for (std::size_t m = 0; m < nm; ++m) {
            g += state.weights[m] * state.modes[m][static_cast<std::size_t>(i + j)] *
                 std::conj(state.modes[m][static_cast<std::size_t>(i - j)]);
        }
        sum += 2.0 * std::real(g * phase);
    }
    return sum * step / kPi;
}

void check_k_grid(const Grid& k_grid) {
    if (k_grid.n < 1) throw std::invalid_argument("wigner: k axis needs at least one point");
    if (!(k_grid.spacing > 0.0) || !std::isfinite(k_grid.spacing)) {
        throw std::invalid_argument("wigner: k axis spacing must be positive");
    }
}

}  // namespace

WignerMap wigner_transform(const EnsembleState& state, const Grid& k_grid, WignerMethod method) {
    check_k_grid(k_grid);
    const int n = state.grid.n;
    if (n < 2) throw std::invalid_argument("wigner: field grid needs at least 2 samples");
    const double step = state.grid.spacing;
    const int J = n - 1;

    WignerMap map;
    map.x_axis = Axis::from_grid(state.grid);
    std::vector<double> kpts(static_cast<std::size_t>(k_grid.n));
    for (int l = 0; l < k_grid.n; ++l) kpts[static_cast<std::size_t>(l)] = k_grid.position(l);
    map.k_axis = Axis(std::move(kpts));
    const std::size_t nk = map.k_axis.size();
    map.values.assign(static_cast<std::size_t>(n) * nk, 0.0);

    if (method == WignerMethod::Fft) {
        const double dphi = -2.0 * step * k_grid.spacing;
        const double phi0 = -2.0 * step * map.k_axis[0];
        const ChirpPlan plan(static_cast<std::size_t>(2 * n - 1), nk, dphi);
        // Row-independent unwrap factor exp(+2 i k_l J step) restoring the
        // j-origin of the packed correlation row.
        std::vector<cd> post(nk);
        for (std::size_t l = 0; l < nk; ++l) {
            post[l] = std::polar(1.0, 2.0 * map.k_axis[l] * static_cast<double>(J) * step);
        }
        std::vector<double> row_residue(static_cast<std::size_t>(n), 0.0);
        parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
            const std::vector<cd> g = correlation_row(state, static_cast<int>(i));
            const std::vector<cd> s = plan.evaluate(g, phi0);
            double resid = 0.0;
            for (std::size_t l = 0; l < nk; ++l) {
                const cd v = post[l] * s[l] * (step / kPi);
                map.values[i * nk + l] = std::real(v);
                resid = std::max(resid, std::abs(std::imag(v)));
            }
            row_residue[i] = resid;
        });
        double residue = 0.0;
        for (double r : row_residue) residue = std::max(residue, r);
        if (residue > 1e-9) {
            throw std::runtime_error("wigner: imaginary residue of the quadrature exceeds 1e-9");
        }
    } else {
        parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
            for (std::size_t l = 0; l < nk; ++l) {
                map.values[i * nk + l] =
                    direct_row_value(state, static_cast<int>(i), map.k_axis[l]);
            }
        });
    }
    return map;
}

WignerMap wigner_map_at(const EnsembleState& state, const std::vector<double>& x_pts,
                        const std::vector<double>& k_pts) {
    if (x_pts.empty() || k_pts.empty()) {
        throw std::invalid_argument("wigner: empty sample-point list");
    }
    std::vector<int> rows(x_pts.size());
    for (std::size_t i = 0; i < x_pts.size(); ++i) rows[i] = state.grid.nearest_index(x_pts[i]);

    WignerMap map;
    map.x_axis = Axis(x_pts);
    map.k_axis = Axis(k_pts);
    const std::size_t nk = map.k_axis.size();
    map.values.assign(x_pts.size() * nk, 0.0);
    parallel_for(x_pts.size(), [&](std::size_t i) {
        for (std::size_t l = 0; l < nk; ++l) {
            map.values[i * nk + l] = direct_row_value(state, rows[i], map.k_axis[l]);
        }
    });
    return map;
}

double wigner_point_integral(const EnsembleState& state, const PhasePoint& p) {
    const int i = state.grid.nearest_index(p.x);
    return direct_row_value(state, i, p.k);
}

double wigner_at_point_parity(const EnsembleState& state, const PhasePoint& p) {
    const EnsembleState displaced = displace_by(state, -p.x, -p.k);
    return std::real(parity_overlap(displaced)) / kPi;
}

namespace {

/// Width-a top-hat Wigner closed form.
double top_hat_w(double a, double x, double k) {
    const double ax = std::abs(x);
    if (ax > 0.5 * a) return 0.0;
    const double len = a - 2.0 * ax;
    const double t = k * len;
    if (std::abs(t) < 1e-8) return len / (kPi * a) * (1.0 - t * t / 6.0);
    return std::sin(t) / (kPi * k * a);
}

}  // namespace

double analytic_wigner(const FieldSpec& spec, const PhasePoint& p) {
    const double x = p.x - spec.center;
    const double k = p.k;
    switch (spec.kind) {
        case FieldKind::TopHat:
            return top_hat_w(spec.width, x, k);
        case FieldKind::Gaussian: {
            const double s = spec.waist;
            return std::exp(-x * x / (s * s) - k * k * s * s) / kPi;
        }
        case FieldKind::DoubleSlit: {
            const double d = spec.spacing;
            const double w = spec.slit_width;
            double v = 0.5 * (top_hat_w(w, x - 0.5 * d, k) + top_hat_w(w, x + 0.5 * d, k));
            if (spec.coherence == Coherence::Coherent) v += std::cos(k * d) * top_hat_w(w, x, k);
            return v;
        }
        case FieldKind::HermiteGauss:
            throw std::invalid_argument("analytic_wigner: no closed form for this field kind");
    }
    throw std::invalid_argument("analytic_wigner: unknown field kind");
}

std::vector<double> marginal_x(const WignerMap& map) {
    const auto wk = map.k_axis.trapezoid_weights();
    std::vector<double> out(map.nx(), 0.0);
    for (std::size_t i = 0; i < map.nx(); ++i) {
        double acc = 0.0;
        for (std::size_t l = 0; l < map.nk(); ++l) acc += wk[l] * map.at(i, l);
        out[i] = acc;
    }
    return out;
}

std::vector<double> marginal_k(const WignerMap& map) {
    const auto wx = map.x_axis.trapezoid_weights();
    std::vector<double> out(map.nk(), 0.0);
    for (std::size_t l = 0; l < map.nk(); ++l) {
        double acc = 0.0;
        for (std::size_t i = 0; i < map.nx(); ++i) acc += wx[i] * map.at(i, l);
        out[l] = acc;
    }
    return out;
}

double raster_integral(const WignerMap& map) {
    const auto wx = map.x_axis.trapezoid_weights();
    const auto wk = map.k_axis.trapezoid_weights();
    double acc = 0.0;
    for (std::size_t i = 0; i < map.nx(); ++i) {
        double row = 0.0;
        for (std::size_t l = 0; l < map.nk(); ++l) row += wk[l] * map.at(i, l);
        acc += wx[i] * row;
    }
    return acc;
}

double normalize_map(WignerMap& map) {
    const double integral = raster_integral(map);
    if (!std::isfinite(integral) || std::abs(integral) < 1e-300) {
        throw std::runtime_error("wigner: map integral vanishes; cannot normalize");
    }
    for (double& v : map.values) v /= integral;
    return integral;
}

Grid nyquist_k_axis(const Grid& grid) {
    if (grid.n < 2 || grid.n % 2 != 0) {
        throw std::invalid_argument("nyquist_k_axis: even sample count required");
    }
    if (!(grid.spacing > 0.0)) {
        throw std::invalid_argument("nyquist_k_axis: grid spacing must be positive");
    }
    const double dk = kPi / (static_cast<double>(grid.n) * grid.spacing);
    return Grid{grid.n + 1, 0.0, dk};
}

}  // namespace sagwig
