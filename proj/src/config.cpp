#include "sagwig/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace sagwig {

namespace {

using nlohmann::json;

/// Strict object view: every accessed key is recorded, and finish() rejects
/// anything left over, naming its dotted path.
class ObjView {
  public:
    ObjView(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
    }

    [[nodiscard]] const std::string& path() const { return path_; }

    bool has(const char* key) {
        if (j_.contains(key)) {
            seen_.insert(key);
            return true;
        }
        return false;
    }

    const json& at(const char* key) {
        if (!j_.contains(key)) throw ConfigError(key_path(key) + ": required key missing");
        seen_.insert(key);
        return j_.at(key);
    }

    double number(const char* key) {
        const json& v = at(key);
        if (!v.is_number()) throw ConfigError(key_path(key) + ": expected a number");
        return v.get<double>();
    }

    double number_or(const char* key, double fallback) {
        return has(key) ? number(key) : fallback;
    }

    int integer(const char* key) {
        const json& v = at(key);
        if (!v.is_number_integer()) throw ConfigError(key_path(key) + ": expected an integer");
        return v.get<int>();
    }

    std::uint64_t uinteger(const char* key) {
        const json& v = at(key);
        if (!(v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0))) {
            throw ConfigError(key_path(key) + ": expected a nonnegative integer");
        }
        return v.get<std::uint64_t>();
    }

    std::uint64_t uinteger_or(const char* key, std::uint64_t fallback) {
        return has(key) ? uinteger(key) : fallback;
    }

    std::string str(const char* key) {
        const json& v = at(key);
        if (!v.is_string()) throw ConfigError(key_path(key) + ": expected a string");
        return v.get<std::string>();
    }

    std::string str_or(const char* key, const std::string& fallback) {
        return has(key) ? str(key) : fallback;
    }

    bool boolean_or(const char* key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_boolean()) throw ConfigError(key_path(key) + ": expected true or false");
        return v.get<bool>();
    }

    ObjView child(const char* key) { return ObjView(at(key), key_path(key)); }

    void finish() {
        for (const auto& item : j_.items()) {
            if (seen_.find(item.key()) == seen_.end()) {
                throw ConfigError(key_path(item.key().c_str()) + ": unknown key");
            }
        }
    }

    [[nodiscard]] std::string key_path(const char* key) const {
        return path_.empty() ? std::string(key) : path_ + "." + key;
    }

  private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void require(bool ok, const std::string& key_path, const char* what) {
    if (!ok) throw ConfigError(key_path + ": " + what);
}

Grid parse_raster(ObjView v, const char* extent_key, const char* center_key) {
    const int points = v.integer("points");
    require(points >= 2, v.key_path("points"), "need at least 2 points");
    const double extent = v.number(extent_key);
    require(extent > 0.0 && std::isfinite(extent), v.key_path(extent_key), "must be positive");
    const double center = v.number_or(center_key, 0.0);
    require(std::isfinite(center), v.key_path(center_key), "must be finite");
    v.finish();
    return make_grid(points, extent, center);
}

FieldSpec parse_field(ObjView v) {
    FieldSpec f;
    const std::string kind = v.str("kind");
    f.center = v.number_or("center_m", 0.0);
    require(std::isfinite(f.center), v.key_path("center_m"), "must be finite");
    if (kind == "top_hat") {
        f.kind = FieldKind::TopHat;
        f.width = v.number("width_m");
        require(f.width > 0.0, v.key_path("width_m"), "must be positive");
    } else if (kind == "double_slit") {
        f.kind = FieldKind::DoubleSlit;
        f.spacing = v.number("separation_m");
        f.slit_width = v.number("slit_width_m");
        require(f.slit_width > 0.0, v.key_path("slit_width_m"), "must be positive");
        require(f.spacing > f.slit_width, v.key_path("separation_m"),
                "must exceed the slit width");
        const std::string coh = v.str_or("coherence", "coherent");
        if (coh == "coherent") {
            f.coherence = Coherence::Coherent;
        } else if (coh == "incoherent") {
            f.coherence = Coherence::Incoherent;
        } else {
            throw ConfigError(v.key_path("coherence") +
                              ": expected \"coherent\" or \"incoherent\"");
        }
    } else if (kind == "gaussian") {
        f.kind = FieldKind::Gaussian;
        f.waist = v.number("waist_m");
        require(f.waist > 0.0, v.key_path("waist_m"), "must be positive");
    } else if (kind == "hermite_gauss") {
        f.kind = FieldKind::HermiteGauss;
        f.waist = v.number("waist_m");
        require(f.waist > 0.0, v.key_path("waist_m"), "must be positive");
        f.order = v.integer("order");
        require(f.order >= 0 && f.order <= 20, v.key_path("order"), "must be in [0, 20]");
    } else {
        throw ConfigError(v.key_path("kind") +
                          ": expected one of \"top_hat\", \"double_slit\", \"gaussian\", "
                          "\"hermite_gauss\"");
    }
    v.finish();
    return f;
}

ExperimentConfig parse_root(const json& root) {
    ObjView v(root, "");
    ExperimentConfig cfg;

    cfg.field = parse_field(v.child("field"));

    {
        ObjView g = v.child("grid");
        const int samples = g.integer("samples");
        require(samples >= 2, g.key_path("samples"), "need at least 2 samples");
        const double extent = g.number("extent_m");
        require(extent > 0.0 && std::isfinite(extent), g.key_path("extent_m"),
                "must be positive");
        const double center = g.number_or("center_m", 0.0);
        require(std::isfinite(center), g.key_path("center_m"), "must be finite");
        g.finish();
        cfg.grid = make_grid(samples, extent, center);
    }

    if (v.has("interferometer")) {
        ObjView i = v.child("interferometer");
        cfg.interferometer.wavelength = i.number_or("wavelength_m", 633e-9);
        require(cfg.interferometer.wavelength > 0.0, i.key_path("wavelength_m"),
                "must be positive");
        cfg.interferometer.na_limit = i.number_or("na_limit", 0.09);
        require(cfg.interferometer.na_limit > 0.0 && cfg.interferometer.na_limit <= 1.0,
                i.key_path("na_limit"), "must be in (0, 1]");
        i.finish();
    }

    {
        ObjView d = v.child("detector");
        cfg.detector.eta = d.number("efficiency");
        require(cfg.detector.eta > 0.0 && cfg.detector.eta <= 1.0, d.key_path("efficiency"),
                "must be in (0, 1]");
        cfg.detector.photon_flux = d.number("photon_flux_hz");
        require(cfg.detector.photon_flux > 0.0, d.key_path("photon_flux_hz"),
                "must be positive");
        cfg.detector.dark_rate = d.number_or("dark_rate_hz", 0.0);
        require(cfg.detector.dark_rate >= 0.0, d.key_path("dark_rate_hz"),
                "must be nonnegative");
        if (d.has("uniformity")) {
            ObjView u = d.child("uniformity");
            const std::string kind = u.str("kind");
            if (kind == "constant") {
                cfg.detector.uniformity.kind = UniformityProfile::Kind::Constant;
            } else if (kind == "linear_gradient") {
                cfg.detector.uniformity.kind = UniformityProfile::Kind::LinearGradient;
                cfg.detector.uniformity.min_value = u.number("min_value");
                require(cfg.detector.uniformity.min_value > 0.0 &&
                            cfg.detector.uniformity.min_value <= 1.0,
                        u.key_path("min_value"), "must be in (0, 1]");
            } else {
                throw ConfigError(u.key_path("kind") +
                                  ": expected \"constant\" or \"linear_gradient\"");
            }
            u.finish();
        }
        d.finish();
    }

    {
        ObjView s = v.child("scan");
        cfg.scan.x_points = parse_raster(s.child("x"), "extent_m", "center_m");
        cfg.scan.theta_points = parse_raster(s.child("theta"), "extent_rad", "center_rad");
        cfg.scan.dwell = s.number("dwell_s");
        require(cfg.scan.dwell > 0.0, s.key_path("dwell_s"), "must be positive");
        cfg.scan.seed = s.uinteger_or("seed", 0);
        cfg.scan.noiseless = s.boolean_or("noiseless", false);
        s.finish();
    }

    if (v.has("background")) {
        ObjView b = v.child("background");
        const std::string method = b.str_or("method", "calibration");
        if (method == "calibration") {
            cfg.background_method = BackgroundMethod::Calibration;
        } else if (method == "plateau") {
            cfg.background_method = BackgroundMethod::Plateau;
        } else {
            throw ConfigError(b.key_path("method") +
                              ": expected \"calibration\" or \"plateau\"");
        }
        cfg.calibration_time = b.number_or("calibration_time_s", 2.0);
        require(cfg.calibration_time > 0.0, b.key_path("calibration_time_s"),
                "must be positive");
        b.finish();
    }

    if (v.has("outputs")) {
        ObjView o = v.child("outputs");
        cfg.out_dir = o.str_or("dir", "out");
        cfg.write_csv = o.boolean_or("csv", true);
        cfg.write_json = o.boolean_or("json", true);
        o.finish();
    }

    v.finish();

    // Cross-checks between sections.
    const double t_lo = cfg.scan.theta_points.min_x();
    const double t_hi = cfg.scan.theta_points.max_x();
    const double max_sin = std::max(std::abs(std::sin(t_lo)), std::abs(std::sin(t_hi)));
    if (max_sin > cfg.interferometer.na_limit * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "scan.theta: raster reaches |sin theta| = " << max_sin
           << ", beyond interferometer.na_limit = " << cfg.interferometer.na_limit;
        throw ConfigError(os.str());
    }
    if (cfg.scan.x_points.spacing < cfg.grid.spacing) {
        throw ConfigError(
            "scan.x: raster pitch is below the field grid step, so neighboring points would "
            "quantize onto the same sample; widen the pitch or refine the grid");
    }
    return cfg;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
        const std::size_t upto = std::min(byte, json_text.size());
        const long line =
            1 + std::count(json_text.begin(), json_text.begin() + static_cast<long>(upto), '\n');
        std::ostringstream os;
        os << "JSON syntax error near line " << line << ": " << e.what();
        throw ConfigError(os.str());
    }
    return parse_root(root);
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json field;
    switch (cfg.field.kind) {
        case FieldKind::TopHat:
            field["kind"] = "top_hat";
            field["width_m"] = cfg.field.width;
            break;
        case FieldKind::DoubleSlit:
            field["kind"] = "double_slit";
            field["separation_m"] = cfg.field.spacing;
            field["slit_width_m"] = cfg.field.slit_width;
            field["coherence"] =
                cfg.field.coherence == Coherence::Coherent ? "coherent" : "incoherent";
            break;
        case FieldKind::Gaussian:
            field["kind"] = "gaussian";
            field["waist_m"] = cfg.field.waist;
            break;
        case FieldKind::HermiteGauss:
            field["kind"] = "hermite_gauss";
            field["waist_m"] = cfg.field.waist;
            field["order"] = cfg.field.order;
            break;
    }
    field["center_m"] = cfg.field.center;

    json detector = {
        {"efficiency", cfg.detector.eta},
        {"photon_flux_hz", cfg.detector.photon_flux},
        {"dark_rate_hz", cfg.detector.dark_rate},
    };
    if (!cfg.detector.uniformity.is_constant()) {
        detector["uniformity"] = {{"kind", "linear_gradient"},
                                  {"min_value", cfg.detector.uniformity.min_value}};
    } else {
        detector["uniformity"] = {{"kind", "constant"}};
    }

    const json root = {
        {"field", field},
        {"grid",
         {{"samples", cfg.grid.n},
          {"extent_m", cfg.grid.extent()},
          {"center_m", cfg.grid.center}}},
        {"interferometer",
         {{"wavelength_m", cfg.interferometer.wavelength},
          {"na_limit", cfg.interferometer.na_limit}}},
        {"detector", detector},
        {"scan",
         {{"x",
           {{"points", cfg.scan.x_points.n},
            {"extent_m", cfg.scan.x_points.extent()},
            {"center_m", cfg.scan.x_points.center}}},
          {"theta",
           {{"points", cfg.scan.theta_points.n},
            {"extent_rad", cfg.scan.theta_points.extent()},
            {"center_rad", cfg.scan.theta_points.center}}},
          {"dwell_s", cfg.scan.dwell},
          {"seed", cfg.scan.seed},
          {"noiseless", cfg.scan.noiseless}}},
        {"background",
         {{"method",
           cfg.background_method == BackgroundMethod::Calibration ? "calibration" : "plateau"},
          {"calibration_time_s", cfg.calibration_time}}},
        {"outputs", {{"dir", cfg.out_dir}, {"csv", cfg.write_csv}, {"json", cfg.write_json}}},
    };
    return root.dump(2) + "\n";
}

}  // namespace sagwig
