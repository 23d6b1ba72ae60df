#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace sagwig {

/// Uniform 1D sample grid. Positions follow the FFT-centered convention
/// x_i = center + (i - n/2) * spacing, so for even n the leftmost sample
/// has no mirror partner (same layout a discrete Fourier axis uses).
struct Grid {
    int n = 0;
    double center = 0.0;
    double spacing = 0.0;

    [[nodiscard]] double extent() const { return n * spacing; }
    [[nodiscard]] double position(int i) const { return center + (i - n / 2) * spacing; }
    [[nodiscard]] double min_x() const { return position(0); }
    [[nodiscard]] double max_x() const { return position(n - 1); }

    /// Index of the sample nearest to x. Throws if x lies more than half a
    /// step outside the sampled span.
    [[nodiscard]] int nearest_index(double x) const {
        const double fi = (x - center) / spacing + n / 2;
        const long li = std::lround(fi);
        if (li < 0 || li >= n) {
            throw std::invalid_argument("grid: coordinate outside sampled span");
        }
        return static_cast<int>(li);
    }

    [[nodiscard]] std::vector<double> positions() const {
        std::vector<double> p(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = position(i);
        return p;
    }
};

inline bool same_grid(const Grid& a, const Grid& b, double rel = 1e-12) {
    if (a.n != b.n) return false;
    const double scale = std::max({std::abs(a.spacing), std::abs(b.spacing), 1e-300});
    if (std::abs(a.spacing - b.spacing) > rel * scale) return false;
    const double cscale = std::max({std::abs(a.center), std::abs(b.center), a.extent()});
    return std::abs(a.center - b.center) <= rel * std::max(cscale, 1e-300);
}

/// Build a grid of n samples spanning `extent` around `center`.
inline Grid make_grid(int n, double extent, double center) {
    if (n < 2) throw std::invalid_argument("make_grid: n must be >= 2");
    if (!(extent > 0.0)) throw std::invalid_argument("make_grid: extent must be > 0");
    return Grid{n, center, extent / n};
}

/// Strictly increasing sample axis; covers both uniform grids and axes that
/// arrive through a nonlinear map (e.g. k = k0*sin(theta) of a uniform theta
/// raster).
struct Axis {
    std::vector<double> pts;

    Axis() = default;
    explicit Axis(std::vector<double> p) : pts(std::move(p)) {
        for (std::size_t i = 1; i < pts.size(); ++i) {
            if (!(pts[i] > pts[i - 1])) {
                throw std::invalid_argument("Axis: samples must be strictly increasing");
            }
        }
    }
    static Axis from_grid(const Grid& g) { return Axis(g.positions()); }

    [[nodiscard]] std::size_t size() const { return pts.size(); }
    double operator[](std::size_t i) const { return pts[i]; }

    /// Trapezoid quadrature weights for integrals over this axis.
    [[nodiscard]] std::vector<double> trapezoid_weights() const {
        const std::size_t m = pts.size();
        std::vector<double> w(m, 0.0);
        if (m < 2) return w;
        for (std::size_t i = 0; i + 1 < m; ++i) {
            const double h = 0.5 * (pts[i + 1] - pts[i]);
            w[i] += h;
            w[i + 1] += h;
        }
        return w;
    }

    [[nodiscard]] std::size_t nearest(double x) const {
        std::size_t best = 0;
        double d = std::abs(pts[0] - x);
        for (std::size_t i = 1; i < pts.size(); ++i) {
            const double di = std::abs(pts[i] - x);
            if (di < d) { d = di; best = i; }
        }
        return best;
    }
};

inline bool same_axis(const Axis& a, const Axis& b, double rel = 1e-9) {
    if (a.size() != b.size()) return false;
    double scale = 1e-300;
    for (std::size_t i = 0; i < a.size(); ++i) {
        scale = std::max({scale, std::abs(a[i]), std::abs(b[i])});
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i] - b[i]) > rel * scale) return false;
    }
    return true;
}

}  // namespace sagwig
