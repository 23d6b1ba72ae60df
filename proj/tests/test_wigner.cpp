#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "sagwig/field.hpp"
#include "sagwig/sagnac.hpp"
#include "sagwig/wigner.hpp"

using namespace sagwig;

namespace {

constexpr double kPi = std::numbers::pi;

/// Deterministic uniform double in [0, 1) (fixed linear congruence).
struct TinyRand {
    unsigned s;
    explicit TinyRand(unsigned seed) : s(seed * 2654435761u + 977u) {}
    double next() {
        s = s * 1664525u + 1013904223u;
        return static_cast<double>(s >> 8) / 16777216.0;
    }
    double range(double lo, double hi) { return lo + (hi - lo) * next(); }
};

EnsembleState small_tophat() {
    const Grid grid = make_grid(256, 1.024e-3, 0.0);  // step 4 um
    FieldSpec spec;
    spec.kind = FieldKind::TopHat;
    spec.width = 2.0e-4;
    return make_state(spec, grid);
}

EnsembleState small_double_slit(Coherence c) {
    const Grid grid = make_grid(256, 1.024e-3, 0.0);
    FieldSpec spec;
    spec.kind = FieldKind::DoubleSlit;
    spec.spacing = 2.8e-4;
    spec.slit_width = 6.0e-5;
    spec.coherence = c;
    return make_state(spec, grid);
}

EnsembleState small_gaussian(int order) {
    const Grid grid = make_grid(256, 1.024e-3, 0.0);
    FieldSpec spec;
    spec.kind = order < 0 ? FieldKind::Gaussian : FieldKind::HermiteGauss;
    spec.waist = 6.0e-5;
    spec.order = std::max(order, 0);
    return make_state(spec, grid);
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double max_map_diff(const WignerMap& a, const WignerMap& b) {
    REQUIRE(a.values.size() == b.values.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
    }
    return m;
}

}  // namespace

TEST_CASE("nyquist k axis spans the alias-free band edge to edge") {
    const Grid grid = make_grid(1010, 4.0e-3, 0.0);
    const Grid k = nyquist_k_axis(grid);
    CHECK(k.n == 1011);
    CHECK(k.position(505) == 0.0);
    const double edge = kPi / (2.0 * grid.spacing);
    CHECK(k.position(0) == doctest::Approx(-edge).epsilon(1e-12));
    CHECK(k.position(1010) == doctest::Approx(edge).epsilon(1e-12));
    CHECK(k.spacing == doctest::Approx(kPi / (1010.0 * grid.spacing)).epsilon(1e-15));

    CHECK_THROWS_AS(nyquist_k_axis(make_grid(255, 1.0, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(nyquist_k_axis(Grid{256, 0.0, -1.0}), std::invalid_argument);
}

TEST_CASE("FFT and direct quadrature evaluate the same transform") {
    const std::vector<EnsembleState> states = {
        small_tophat(), small_double_slit(Coherence::Coherent),
        small_double_slit(Coherence::Incoherent), small_gaussian(-1), small_gaussian(1)};
    for (const EnsembleState& st : states) {
        const Grid kg = nyquist_k_axis(st.grid);
        const WignerMap fast = wigner_transform(st, kg, WignerMethod::Fft);
        const WignerMap slow = wigner_transform(st, kg, WignerMethod::Direct);
        CHECK(max_map_diff(fast, slow) < 1e-9);
    }
}

TEST_CASE("integral and displaced-parity routes agree pointwise") {
    struct Case {
        EnsembleState st;
        double max_shift_steps;
    };
    const std::vector<Case> cases = {
        {small_tophat(), 50.0},
        {small_double_slit(Coherence::Coherent), 40.0},
        {small_double_slit(Coherence::Incoherent), 40.0},
        {small_gaussian(-1), 10.0},
        {small_gaussian(1), 4.0},
    };
    TinyRand rng(42);
    for (const Case& c : cases) {
        const double step = c.st.grid.spacing;
        const double kmax = 0.4 * kPi / step;
        for (int t = 0; t < 20; ++t) {
            const PhasePoint p{rng.range(-1.0, 1.0) * c.max_shift_steps * step,
                               rng.range(-kmax, kmax)};
            const double wi = wigner_point_integral(c.st, p);
            const double wp = wigner_at_point_parity(c.st, p);
            CHECK(std::abs(wi - wp) < 1e-9);
        }
    }
}

TEST_CASE("discrete top-hat transform obeys the closed-form lattice identity") {
    // For a flat slit whose edges fall midway between samples, the discrete
    // lag sum is a Dirichlet kernel, so the sampled transform equals the
    // continuum closed form times k*step/sin(k*step) exactly.
    const Grid grid = make_grid(1010, 4.0e-3, 0.0);
    FieldSpec spec;
    spec.kind = FieldKind::TopHat;
    spec.width = 4.0e-4;
    const EnsembleState st = make_state(spec, grid);

    FieldSpec quantized = spec;
    quantized.width = 101.0 * grid.spacing;  // realized width on this grid

    TinyRand rng(7);
    for (int t = 0; t < 200; ++t) {
        const int i = 455 + static_cast<int>(rng.range(0.0, 101.0));  // inside the slit
        const double k = rng.range(1.0e3, 0.4 * kPi / grid.spacing);
        const double x = grid.position(std::min(i, 555));
        const double disc = wigner_point_integral(st, PhasePoint{x, k});
        const double lattice = k * grid.spacing / std::sin(k * grid.spacing);
        const double expect = analytic_wigner(quantized, PhasePoint{x, k}) * lattice;
        CHECK(std::abs(disc - expect) < 1e-12);
    }
}

TEST_CASE("characteristic phase-space-origin values") {
    // even pure states reach the parity bound pi*W(0,0) = 1
    {
        const Grid grid = make_grid(1010, 4.0e-3, 0.0);
        FieldSpec spec;
        spec.kind = FieldKind::TopHat;
        spec.width = 4.0e-4;
        const EnsembleState st = make_state(spec, grid);
        CHECK(kPi * wigner_point_integral(st, PhasePoint{0.0, 0.0}) ==
              doctest::Approx(1.0).epsilon(1e-12));
        // first transform zero of the slit: k = pi / width
        CHECK(std::abs(wigner_point_integral(st, PhasePoint{0.0, 7853.9816339744821})) < 1e-12);
    }
    {
        const Grid grid = make_grid(1024, 3.2768e-3, 0.0);
        FieldSpec spec;
        spec.kind = FieldKind::Gaussian;
        spec.waist = 1.0e-4;
        CHECK(kPi * wigner_point_integral(make_state(spec, grid), PhasePoint{0.0, 0.0}) ==
              doctest::Approx(1.0).epsilon(1e-12));
        spec.kind = FieldKind::HermiteGauss;
        spec.order = 1;
        // odd pure states reach the opposite bound
        CHECK(kPi * wigner_point_integral(make_state(spec, grid), PhasePoint{0.0, 0.0}) ==
              doctest::Approx(-1.0).epsilon(1e-12));
    }
    {
        const Grid grid = make_grid(1024, 1.2047058823529412e-3, 0.0);
        FieldSpec spec;
        spec.kind = FieldKind::DoubleSlit;
        spec.spacing = 2.8e-4;
        spec.slit_width = 6.0e-5;
        spec.coherence = Coherence::Coherent;
        CHECK(kPi * wigner_point_integral(make_state(spec, grid), PhasePoint{0.0, 0.0}) ==
              doctest::Approx(1.0).epsilon(1e-12));
        // an incoherent mixture has no parity coherence at the origin
        spec.coherence = Coherence::Incoherent;
        CHECK(std::abs(wigner_point_integral(make_state(spec, grid), PhasePoint{0.0, 0.0})) <
              1e-15);
    }
}

TEST_CASE("phase-space displacement translates the transform") {
    const EnsembleState st = small_tophat();
    const double step = st.grid.spacing;
    const double dx = 12.0 * step;
    const double dk = 5000.0;
    const EnsembleState moved = displace_by(st, dx, dk);

    TinyRand rng(5);
    for (int t = 0; t < 15; ++t) {
        const int i = 110 + static_cast<int>(rng.range(0.0, 37.0));
        const double k = rng.range(-2.0e4, 2.0e4);
        const double x = st.grid.position(i);
        const double w0 = wigner_point_integral(st, PhasePoint{x, k});
        const double w1 = wigner_point_integral(moved, PhasePoint{x + dx, k + dk});
        CHECK(std::abs(w1 - w0) < 1e-12);
    }
}

TEST_CASE("marginals over the nyquist axis are exact") {
    const std::vector<EnsembleState> states = {
        small_tophat(), small_double_slit(Coherence::Incoherent), small_gaussian(1)};
    for (const EnsembleState& st : states) {
        const Grid kg = nyquist_k_axis(st.grid);
        const WignerMap map = wigner_transform(st, kg, WignerMethod::Fft);
        const std::size_t n = static_cast<std::size_t>(st.grid.n);

        // k-marginal of the map reproduces the position intensity pointwise
        const std::vector<double> mx = marginal_x(map);
        std::vector<double> intensity(n, 0.0);
        for (std::size_t m = 0; m < st.mode_count(); ++m) {
            for (std::size_t i = 0; i < n; ++i) {
                intensity[i] += st.weights[m] * std::norm(st.modes[m][i]);
            }
        }
        const double iscale = max_abs(intensity);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(std::abs(mx[i] - intensity[i]) < 1e-12 * iscale);
        }

        // x-marginal reproduces the folded spectral intensity
        // (Delta^2/(2 pi)) * [|F(k)|^2 + |F(k - pi/Delta)|^2]
        const std::vector<double> mk = marginal_k(map);
        const double step = st.grid.spacing;
        std::vector<double> folded(map.nk(), 0.0);
        for (std::size_t l = 0; l < map.nk(); ++l) {
            const double k1 = map.k_axis[l];
            const double k2 = k1 - kPi / step;
            double acc = 0.0;
            for (std::size_t m = 0; m < st.mode_count(); ++m) {
                cd f1{0.0, 0.0}, f2{0.0, 0.0};
                for (std::size_t u = 0; u < n; ++u) {
                    const double x = st.grid.position(static_cast<int>(u));
                    f1 += st.modes[m][u] * std::polar(1.0, -k1 * x);
                    f2 += st.modes[m][u] * std::polar(1.0, -k2 * x);
                }
                acc += st.weights[m] * (std::norm(f1) + std::norm(f2));
            }
            folded[l] = acc * step * step / (2.0 * kPi);
        }
        const double kscale = max_abs(folded);
        for (std::size_t l = 0; l < map.nk(); ++l) {
            CHECK(std::abs(mk[l] - folded[l]) < 1e-11 * kscale);
        }

        // and the full raster integral is the total power
        CHECK(raster_integral(map) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("normalize_map rescales to a unit raster integral") {
    const EnsembleState st = small_tophat();
    WignerMap map = wigner_transform(st, nyquist_k_axis(st.grid));
    for (double& v : map.values) v *= 3.0;
    const double divisor = normalize_map(map);
    CHECK(divisor == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(raster_integral(map) == doctest::Approx(1.0).epsilon(1e-12));

    WignerMap zero = map;
    for (double& v : zero.values) v = 0.0;
    CHECK_THROWS_AS((void)normalize_map(zero), std::runtime_error);
}

TEST_CASE("arbitrary-point maps match the full transform") {
    const EnsembleState st = small_tophat();
    const Grid kg = nyquist_k_axis(st.grid);
    const WignerMap full = wigner_transform(st, kg, WignerMethod::Fft);

    const std::vector<std::size_t> xi = {100, 128, 150};
    const std::vector<std::size_t> ki = {0, 64, 128, 200};
    std::vector<double> x_pts, k_pts;
    for (std::size_t i : xi) x_pts.push_back(full.x_axis[i]);
    for (std::size_t l : ki) k_pts.push_back(full.k_axis[l]);
    const WignerMap sub = wigner_map_at(st, x_pts, k_pts);

    for (std::size_t a = 0; a < xi.size(); ++a) {
        for (std::size_t b = 0; b < ki.size(); ++b) {
            CHECK(std::abs(sub.at(a, b) - full.at(xi[a], ki[b])) < 1e-9);
        }
    }

    CHECK_THROWS_AS(wigner_map_at(st, {}, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(wigner_transform(st, Grid{0, 0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(wigner_transform(st, Grid{11, 0.0, -1.0}), std::invalid_argument);
}

TEST_CASE("closed forms: symmetry, small-k continuity, unsupported kinds") {
    FieldSpec spec;
    spec.kind = FieldKind::TopHat;
    spec.width = 4.0e-4;
    CHECK(analytic_wigner(spec, PhasePoint{1.0e-4, 3000.0}) ==
          doctest::Approx(analytic_wigner(spec, PhasePoint{-1.0e-4, 3000.0})).epsilon(1e-14));
    CHECK(analytic_wigner(spec, PhasePoint{3.0e-4, 100.0}) == 0.0);  // outside the slit
    // k -> 0 limit is continuous
    const double w0 = analytic_wigner(spec, PhasePoint{1.0e-4, 0.0});
    const double weps = analytic_wigner(spec, PhasePoint{1.0e-4, 1.0e-9});
    CHECK(w0 == doctest::Approx((4.0e-4 - 2.0e-4) / (kPi * 4.0e-4)).epsilon(1e-12));
    CHECK(std::abs(weps - w0) < 1e-12);

    FieldSpec hg;
    hg.kind = FieldKind::HermiteGauss;
    hg.waist = 1.0e-4;
    hg.order = 1;
    CHECK_THROWS_AS((void)analytic_wigner(hg, PhasePoint{0.0, 0.0}), std::invalid_argument);
}
