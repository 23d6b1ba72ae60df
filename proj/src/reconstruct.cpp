#include "sagwig/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "sagwig/rng.hpp"

namespace sagwig {

namespace {

constexpr double kPi = std::numbers::pi;

/// Salt folded into the run seed for the calibration sub-runs, so their
/// streams never collide with raster-pixel streams.
constexpr std::uint64_t kCalibrationSalt = 0xCA11B7A7E5EED5ull;

/// Border-frame membership for the outer 10% of each raster axis (at least
/// one row/column on every side).
struct BorderFrame {
    std::size_t mx, mt, nx, nt;
    [[nodiscard]] bool contains(std::size_t i, std::size_t j) const {
        return i < mx || i >= nx - mx || j < mt || j >= nt - mt;
    }
};

BorderFrame border_frame(std::size_t nx, std::size_t nt) {
    const auto margin = [](std::size_t n) {
        return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(0.1 * static_cast<double>(n))));
    };
    return BorderFrame{margin(nx), margin(nt), nx, nt};
}

/// Contiguous runs of section values >= threshold, at least two samples long
/// (isolated single-sample excursions are treated as noise).
struct Region {
    std::size_t lo, hi;  // inclusive
};

std::vector<Region> find_regions(const std::vector<double>& s, double thr) {
    std::vector<Region> regions;
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] >= thr) {
            std::size_t j = i;
            while (j + 1 < s.size() && s[j + 1] >= thr) ++j;
            if (j > i) regions.push_back({i, j});
            i = j + 1;
        } else {
            ++i;
        }
    }
    return regions;
}

std::size_t region_argmax(const std::vector<double>& s, const Region& r) {
    std::size_t best = r.lo;
    for (std::size_t i = r.lo + 1; i <= r.hi; ++i) {
        if (s[i] > s[best]) best = i;
    }
    return best;
}

/// x-intercept of the least-squares line through the edge samples lying at or
/// below half of the local peak (walking inward from the region boundary).
/// Exact for linear flanks, robust to percent-level noise otherwise.
double edge_base(const Axis& axis, const std::vector<double>& s, const Region& r, bool left) {
    const int ipk = static_cast<int>(region_argmax(s, r));
    const double half = 0.5 * s[static_cast<std::size_t>(ipk)];
    const int start = static_cast<int>(left ? r.lo : r.hi);
    const int dir = left ? +1 : -1;
    std::vector<std::pair<double, double>> pts;
    int i = start;
    while (dir * (ipk - i) >= 0 && s[static_cast<std::size_t>(i)] <= half) {
        pts.emplace_back(axis[static_cast<std::size_t>(i)], s[static_cast<std::size_t>(i)]);
        i += dir;
    }
    while (pts.size() < 2 && dir * (ipk - i) >= 0) {
        pts.emplace_back(axis[static_cast<std::size_t>(i)], s[static_cast<std::size_t>(i)]);
        i += dir;
    }
    if (pts.size() < 2) return axis[left ? r.lo : r.hi];
    double sx = 0.0, sy = 0.0;
    for (const auto& [x, y] : pts) sx += x, sy += y;
    const double mx = sx / static_cast<double>(pts.size());
    const double my = sy / static_cast<double>(pts.size());
    double cov = 0.0, var = 0.0;
    for (const auto& [x, y] : pts) {
        cov += (x - mx) * (y - my);
        var += (x - mx) * (x - mx);
    }
    if (!(var > 0.0)) return axis[left ? r.lo : r.hi];
    const double slope = cov / var;
    if ((left && !(slope > 0.0)) || (!left && !(slope < 0.0))) {
        return axis[left ? r.lo : r.hi];
    }
    return mx - my / slope;
}

double region_centroid(const Axis& axis, const std::vector<double>& s, const Region& r) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = r.lo; i <= r.hi; ++i) {
        num += axis[i] * s[i];
        den += s[i];
    }
    return num / den;
}

/// First sign change of the section walking outward from index j0 in the
/// given direction; linearly interpolated crossing, or nullopt.
std::optional<double> first_zero_crossing(const Axis& k, const std::vector<double>& s,
                                          std::size_t j0, int dir) {
    std::size_t j = j0;
    for (;;) {
        if ((dir > 0 && j + 1 >= s.size()) || (dir < 0 && j == 0)) return std::nullopt;
        const std::size_t jn = (dir > 0) ? j + 1 : j - 1;
        if (s[j] > 0.0 && s[jn] <= 0.0) {
            const double t = s[j] / (s[j] - s[jn]);
            return k[j] + t * (k[jn] - k[j]);
        }
        j = jn;
    }
}

double clamped_asin(double ratio) { return std::asin(std::clamp(ratio, -1.0, 1.0)); }

/// |sum_j s[j] exp(-2 pi i f j / n)| for a fractional bin f.
double dft_magnitude(const std::vector<double>& s, double f) {
    const double w = -2.0 * kPi * f / static_cast<double>(s.size());
    cd acc{0.0, 0.0};
    for (std::size_t j = 0; j < s.size(); ++j) {
        acc += s[j] * std::polar(1.0, w * static_cast<double>(j));
    }
    return std::abs(acc);
}

}  // namespace

double estimate_background(const CountMap& map, BackgroundMethod method,
                           double calibration_time) {
    if (map.counts.empty()) throw std::invalid_argument("background: empty count map");
    if (method == BackgroundMethod::Calibration) {
        if (!(calibration_time > 0.0)) {
            throw std::invalid_argument("background: calibration time must be positive");
        }
        const double arm = 0.25 * map.det.eta * map.det.photon_flux;
        const double dark = map.det.dark_rate;
        const double t = calibration_time;
        double c1, c2, cd_run;
        if (map.scan.noiseless) {
            c1 = (arm + dark) * t;
            c2 = (arm + dark) * t;
            cd_run = dark * t;
        } else {
            CounterRng r1(stream_key(map.scan.seed ^ kCalibrationSalt, 1, 0));
            CounterRng r2(stream_key(map.scan.seed ^ kCalibrationSalt, 2, 0));
            CounterRng rd(stream_key(map.scan.seed ^ kCalibrationSalt, 3, 0));
            c1 = static_cast<double>(poisson_sample((arm + dark) * t, r1));
            c2 = static_cast<double>(poisson_sample((arm + dark) * t, r2));
            cd_run = static_cast<double>(poisson_sample(dark * t, rd));
        }
        return (c1 + c2 - cd_run) / t * map.scan.dwell;
    }
    // Plateau: mean counts over the outer border frame.
    const std::size_t nx = map.nx();
    const std::size_t nt = map.ntheta();
    if (nx < 3 || nt < 3) {
        throw std::invalid_argument("background: plateau method needs at least a 3x3 raster");
    }
    const BorderFrame frame = border_frame(nx, nt);
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < nt; ++j) {
            if (frame.contains(i, j)) {
                sum += map.counts[map.index(i, j)];
                ++count;
            }
        }
    }
    return sum / static_cast<double>(count);
}

FeatureSet extract_features(const WignerMap& map, const FieldSpec& field, double wavelength) {
    if (map.nx() < 6 || map.nk() < 6) {
        throw std::invalid_argument("features: raster too small (need at least 6x6)");
    }
    if (!(wavelength > 0.0)) throw std::invalid_argument("features: wavelength must be positive");
    const double k0 = 2.0 * kPi / wavelength;

    FeatureSet out;

    // --- section along x at k ~ 0 ---
    const std::size_t ik0 = map.k_axis.nearest(0.0);
    std::vector<double> sx(map.nx());
    for (std::size_t i = 0; i < map.nx(); ++i) sx[i] = map.at(i, ik0);
    const double peak_x = *std::max_element(sx.begin(), sx.end());
    if (!(peak_x > 0.0)) throw std::invalid_argument("features: section has no positive peak");
    const auto regions = find_regions(sx, 0.05 * peak_x);
    if (regions.empty()) throw std::invalid_argument("features: no section region above threshold");
    out.support_width =
        edge_base(map.x_axis, sx, regions.back(), false) -
        edge_base(map.x_axis, sx, regions.front(), true);

    double section_x = field.center;  // x position of the section along k
    if (field.kind == FieldKind::DoubleSlit && regions.size() >= 2) {
        const double c_first = region_centroid(map.x_axis, sx, regions.front());
        const double c_last = region_centroid(map.x_axis, sx, regions.back());
        out.lobe_separation = c_last - c_first;
        section_x = c_last;  // cross a single aperture for the divergence section
    }

    // --- section along k ---
    const std::size_t ixs = map.x_axis.nearest(section_x);
    std::vector<double> sk(map.nk());
    for (std::size_t j = 0; j < map.nk(); ++j) sk[j] = map.at(ixs, j);
    const std::size_t jk0 = map.k_axis.nearest(0.0);

    const auto zp = first_zero_crossing(map.k_axis, sk, jk0, +1);
    const auto zn = first_zero_crossing(map.k_axis, sk, jk0, -1);
    double kz = 0.0;
    if (zp && zn) {
        kz = 0.5 * (*zp - *zn);
    } else if (zp) {
        kz = *zp;
    } else if (zn) {
        kz = -*zn;
    }
    out.first_zero_theta = clamped_asin(kz / k0);

    const double peak_k = *std::max_element(sk.begin(), sk.end());
    if (peak_k > 0.0) {
        const double thr = 0.05 * peak_k;
        const std::size_t jpk = static_cast<std::size_t>(
            std::max_element(sk.begin(), sk.end()) - sk.begin());
        std::size_t jl = jpk, jr = jpk;
        while (jl > 0 && sk[jl - 1] >= thr) --jl;
        while (jr + 1 < sk.size() && sk[jr + 1] >= thr) ++jr;
        double k_left = map.k_axis[jl];
        double k_right = map.k_axis[jr];
        if (jl > 0) {
            const double t = (sk[jl] - thr) / (sk[jl] - sk[jl - 1]);
            k_left = map.k_axis[jl] + t * (map.k_axis[jl - 1] - map.k_axis[jl]);
        }
        if (jr + 1 < sk.size()) {
            const double t = (sk[jr] - thr) / (sk[jr] - sk[jr + 1]);
            k_right = map.k_axis[jr] + t * (map.k_axis[jr + 1] - map.k_axis[jr]);
        }
        out.full_width_theta = clamped_asin(k_right / k0) - clamped_asin(k_left / k0);
    }

    // --- fringe features (double slit only), on the x ~ center section ---
    if (field.kind == FieldKind::DoubleSlit) {
        if (!(field.spacing > 0.0)) {
            throw std::invalid_argument("features: double-slit separation must be positive");
        }
        const std::size_t ixc = map.x_axis.nearest(field.center);
        std::vector<double> sc(map.nk());
        for (std::size_t j = 0; j < map.nk(); ++j) sc[j] = map.at(ixc, j);

        // Dominant period of the demeaned section via a coarse DFT over the
        // (nearly uniform) k raster, refined by a fine fractional-bin sweep.
        const std::size_t n = sc.size();
        const double mean = std::accumulate(sc.begin(), sc.end(), 0.0) / static_cast<double>(n);
        std::vector<double> det(n);
        for (std::size_t j = 0; j < n; ++j) det[j] = sc[j] - mean;
        double best_f = 2.0, best_mag = -1.0;
        for (std::size_t f = 2; f <= n / 2; ++f) {
            const double mag = dft_magnitude(det, static_cast<double>(f));
            if (mag > best_mag) {
                best_mag = mag;
                best_f = static_cast<double>(f);
            }
        }
        // The slit-width envelope broadens the fringe line into a band of
        // half-width ~ slit_width/separation relative to the line, so a bare
        // argmax can land anywhere on the flattened top. Sweep a window wide
        // enough to cover the band and locate the period at the power
        // centroid of the half-power region around the peak, which stays at
        // the band center as the top flattens.
        constexpr int kSweepSteps = 1024;
        const double f_lo = std::max(1.25, best_f - 4.0);
        const double f_hi = std::min(static_cast<double>(n) / 2.0, best_f + 4.0);
        std::vector<double> power(kSweepSteps + 1);
        int peak_s = 0;
        for (int s = 0; s <= kSweepSteps; ++s) {
            const double f = f_lo + (f_hi - f_lo) * static_cast<double>(s) / kSweepSteps;
            const double mag = dft_magnitude(det, f);
            power[static_cast<std::size_t>(s)] = mag * mag;
            if (power[static_cast<std::size_t>(s)] > power[static_cast<std::size_t>(peak_s)]) {
                peak_s = s;
            }
        }
        const double half_power = 0.5 * power[static_cast<std::size_t>(peak_s)];
        int band_lo = peak_s, band_hi = peak_s;
        while (band_lo > 0 && power[static_cast<std::size_t>(band_lo - 1)] >= half_power) {
            --band_lo;
        }
        while (band_hi < kSweepSteps &&
               power[static_cast<std::size_t>(band_hi + 1)] >= half_power) {
            ++band_hi;
        }
        double power_sum = 0.0, weighted_f = 0.0;
        for (int s = band_lo; s <= band_hi; ++s) {
            const double f = f_lo + (f_hi - f_lo) * static_cast<double>(s) / kSweepSteps;
            power_sum += power[static_cast<std::size_t>(s)];
            weighted_f += f * power[static_cast<std::size_t>(s)];
        }
        const double fine_f = power_sum > 0.0 ? weighted_f / power_sum : best_f;
        const double pitch =
            (map.k_axis[n - 1] - map.k_axis[0]) / static_cast<double>(n - 1);
        out.fringe_period_k = static_cast<double>(n) * pitch / fine_f;

        // Visibility of the equivalent count fringe 1 - pi*W over one nominal
        // period 2*pi/separation around k = 0. The nominal window keeps the
        // measure well-defined even when decoherence erases the fringe.
        const double half_window = kPi / field.spacing;
        double fmax = -1e300, fmin = 1e300;
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(map.k_axis[j]) <= half_window) {
                const double v = 1.0 - kPi * sc[j];
                fmax = std::max(fmax, v);
                fmin = std::min(fmin, v);
            }
        }
        if (fmax >= fmin) {
            const double denom = fmax + fmin;
            out.fringe_visibility = (std::abs(denom) < 1e-12) ? 1.0 : (fmax - fmin) / denom;
        }
    }
    return out;
}

ReconstructionReport reconstruct_wigner(const CountMap& map, double background,
                                        const FieldSpec& field) {
    const std::size_t nx = map.nx();
    const std::size_t nt = map.ntheta();
    if (nx < 2 || nt < 2) throw std::invalid_argument("reconstruct: raster needs >= 2x2 points");
    if (map.counts.size() != nx * nt) {
        throw std::invalid_argument("reconstruct: count array does not match the raster");
    }

    ReconstructionReport report;
    report.background_counts = background;

    std::vector<double> kpts(nt);
    for (std::size_t j = 0; j < nt; ++j) {
        kpts[j] = tilt_to_wavevector(map.theta_actual[j], map.cfg.wavelength);
    }
    report.wigner.x_axis = Axis(map.x_actual);
    report.wigner.k_axis = Axis(std::move(kpts));
    report.wigner.values.resize(nx * nt);
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < nt; ++j) {
            report.wigner.values[i * nt + j] = background - map.counts[map.index(i, j)];
        }
    }

    const double integral = raster_integral(report.wigner);
    if (!(integral > 0.0) || !std::isfinite(integral)) {
        throw std::runtime_error(
            "reconstruct: raw map integral is not positive; background estimate or raster "
            "coverage is inconsistent with the data");
    }
    for (double& v : report.wigner.values) v /= integral;
    report.scale = integral;

    double peak = 0.0;
    for (double v : report.wigner.values) peak = std::max(peak, std::abs(v));
    const BorderFrame frame = border_frame(nx, nt);
    double border_sum = 0.0;
    std::size_t border_n = 0;
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < nt; ++j) {
            if (frame.contains(i, j)) {
                border_sum += report.wigner.values[i * nt + j];
                ++border_n;
            }
        }
    }
    report.plateau_residual = border_sum / static_cast<double>(border_n) / peak;
    if (std::abs(report.plateau_residual) > 0.01) {
        std::ostringstream os;
        os << "plateau residual " << report.plateau_residual
           << " exceeds 1% of the peak: the raster border is not clear of the state, or the "
              "background estimate is off";
        report.warnings.push_back(os.str());
    }

    try {
        report.features = extract_features(report.wigner, field, map.cfg.wavelength);
    } catch (const std::exception& e) {
        report.warnings.push_back(std::string("feature extraction failed: ") + e.what());
    }
    return report;
}

CompareMetrics compare_maps(const WignerMap& a, const WignerMap& b) {
    if (!same_axis(a.x_axis, b.x_axis) || !same_axis(a.k_axis, b.k_axis)) {
        throw std::invalid_argument("compare: maps are sampled on different axes");
    }
    if (a.values.size() != b.values.size()) {
        throw std::invalid_argument("compare: value arrays differ in size");
    }
    CompareMetrics m;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double d = a.values[i] - b.values[i];
        num += d * d;
        den += b.values[i] * b.values[i];
    }
    if (den == 0.0) {
        m.l2_relative = (num == 0.0) ? 0.0 : std::numeric_limits<double>::infinity();
    } else {
        m.l2_relative = std::sqrt(num / den);
    }

    const double n = static_cast<double>(a.values.size());
    const double ma = std::accumulate(a.values.begin(), a.values.end(), 0.0) / n;
    const double mb = std::accumulate(b.values.begin(), b.values.end(), 0.0) / n;
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double da = a.values[i] - ma;
        const double db = b.values[i] - mb;
        cov += da * db;
        va += da * da;
        vb += db * db;
    }
    if (va > 0.0 && vb > 0.0) {
        m.pearson = cov / std::sqrt(va * vb);
    } else {
        m.pearson = (a.values == b.values) ? 1.0 : 0.0;
    }

    const auto pa = std::max_element(a.values.begin(), a.values.end()) - a.values.begin();
    const auto pb = std::max_element(b.values.begin(), b.values.end()) - b.values.begin();
    const long nka = static_cast<long>(a.nk());
    m.peak_shift_x = static_cast<long>(pa) / nka - static_cast<long>(pb) / nka;
    m.peak_shift_k = static_cast<long>(pa) % nka - static_cast<long>(pb) % nka;
    return m;
}

}  // namespace sagwig
