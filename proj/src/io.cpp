#include "sagwig/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "json.hpp"

namespace sagwig {

namespace {

using nlohmann::json;

double parse_double(const std::string& tok, const char* what, std::size_t line_no) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last) {
        std::ostringstream os;
        os << "CSV line " << line_no << ": cannot parse " << what << " from \"" << tok << "\"";
        throw std::runtime_error(os.str());
    }
    return v;
}

long long parse_int(const std::string& tok, const char* what, std::size_t line_no) {
    long long v = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
        std::ostringstream os;
        os << "CSV line " << line_no << ": cannot parse " << what << " from \"" << tok << "\"";
        throw std::runtime_error(os.str());
    }
    return v;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        start = end + 1;
    }
    return lines;
}

json features_to_json(const FeatureSet& f) {
    json j = {
        {"support_width_m", f.support_width},
        {"first_zero_theta_rad", f.first_zero_theta},
        {"full_width_theta_rad", f.full_width_theta},
    };
    if (f.lobe_separation) j["lobe_separation_m"] = *f.lobe_separation;
    if (f.fringe_period_k) j["fringe_period_k_radpm"] = *f.fringe_period_k;
    if (f.fringe_visibility) j["fringe_visibility"] = *f.fringe_visibility;
    return j;
}

}  // namespace

std::string fmt_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void atomic_write_file(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
        if (ec) {
            throw std::runtime_error("cannot create directory " +
                                     target.parent_path().string() + ": " + ec.message());
        }
    }
    const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        throw std::runtime_error("cannot move " + tmp.string() + " to " + path + ": " +
                                 ec.message());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string counts_to_csv(const CountMap& map) {
    std::string out = "ix,itheta,x_m,theta_rad,counts,mean_rate_hz\n";
    const bool integer_counts = !map.scan.noiseless;
    for (std::size_t i = 0; i < map.nx(); ++i) {
        for (std::size_t j = 0; j < map.ntheta(); ++j) {
            const std::size_t idx = map.index(i, j);
            out += std::to_string(i);
            out += ',';
            out += std::to_string(j);
            out += ',';
            out += fmt_double(map.x_actual[i]);
            out += ',';
            out += fmt_double(map.theta_actual[j]);
            out += ',';
            if (integer_counts) {
                out += std::to_string(static_cast<long long>(map.counts[idx]));
            } else {
                out += fmt_double(map.counts[idx]);
            }
            out += ',';
            out += fmt_double(map.mean_rates[idx]);
            out += '\n';
        }
    }
    return out;
}

CountMap counts_from_csv(const std::string& csv_text, const ExperimentConfig& cfg) {
    const auto lines = split_lines(csv_text);
    if (lines.empty() || lines[0] != "ix,itheta,x_m,theta_rad,counts,mean_rate_hz") {
        throw std::runtime_error(
            "counts CSV: missing header ix,itheta,x_m,theta_rad,counts,mean_rate_hz");
    }
    const std::size_t nx = static_cast<std::size_t>(cfg.scan.x_points.n);
    const std::size_t nt = static_cast<std::size_t>(cfg.scan.theta_points.n);

    CountMap map;
    map.scan = cfg.scan;
    map.det = cfg.detector;
    map.cfg = cfg.interferometer;
    map.x_actual.assign(nx, 0.0);
    map.theta_actual.assign(nt, 0.0);
    map.counts.assign(nx * nt, 0.0);
    map.mean_rates.assign(nx * nt, 0.0);
    std::vector<char> seen(nx * nt, 0);
    std::vector<char> x_set(nx, 0), t_set(nt, 0);

    std::size_t data_rows = 0;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        const auto f = split_fields(lines[li]);
        if (f.size() != 6) {
            std::ostringstream os;
            os << "counts CSV line " << li + 1 << ": expected 6 fields, found " << f.size();
            throw std::runtime_error(os.str());
        }
        const long long ix = parse_int(f[0], "ix", li + 1);
        const long long it = parse_int(f[1], "itheta", li + 1);
        if (ix < 0 || static_cast<std::size_t>(ix) >= nx || it < 0 ||
            static_cast<std::size_t>(it) >= nt) {
            std::ostringstream os;
            os << "counts CSV line " << li + 1 << ": pixel (" << ix << "," << it
               << ") outside the " << nx << "x" << nt << " raster in the config";
            throw std::runtime_error(os.str());
        }
        const std::size_t i = static_cast<std::size_t>(ix);
        const std::size_t j = static_cast<std::size_t>(it);
        const double x = parse_double(f[2], "x_m", li + 1);
        const double theta = parse_double(f[3], "theta_rad", li + 1);
        const double counts = parse_double(f[4], "counts", li + 1);
        const double rate = parse_double(f[5], "mean_rate_hz", li + 1);

        const std::size_t idx = map.index(i, j);
        if (seen[idx]) {
            std::ostringstream os;
            os << "counts CSV line " << li + 1 << ": duplicate pixel (" << ix << "," << it << ")";
            throw std::runtime_error(os.str());
        }
        seen[idx] = 1;
        ++data_rows;
        map.counts[idx] = counts;
        map.mean_rates[idx] = rate;

        auto stash_coord = [&](std::vector<double>& axis, std::vector<char>& set,
                               std::size_t pos, double value, const char* name) {
            if (!set[pos]) {
                axis[pos] = value;
                set[pos] = 1;
            } else if (axis[pos] != value) {
                std::ostringstream os;
                os << "counts CSV line " << li + 1 << ": inconsistent " << name
                   << " for its raster index";
                throw std::runtime_error(os.str());
            }
        };
        stash_coord(map.x_actual, x_set, i, x, "x_m");
        stash_coord(map.theta_actual, t_set, j, theta, "theta_rad");
    }
    if (data_rows != nx * nt) {
        std::ostringstream os;
        os << "counts CSV: expected " << nx * nt << " data rows for the " << nx << "x" << nt
           << " raster in the config, found " << data_rows;
        throw std::runtime_error(os.str());
    }
    return map;
}

std::string counts_to_json(const CountMap& map, const ExperimentConfig& cfg) {
    json rows = json::array();
    json rates = json::array();
    for (std::size_t i = 0; i < map.nx(); ++i) {
        json row = json::array();
        json rrow = json::array();
        for (std::size_t j = 0; j < map.ntheta(); ++j) {
            row.push_back(map.counts[map.index(i, j)]);
            rrow.push_back(map.mean_rates[map.index(i, j)]);
        }
        rows.push_back(std::move(row));
        rates.push_back(std::move(rrow));
    }
    const json root = {
        {"config", json::parse(config_to_json(cfg))},
        {"x_m", map.x_actual},
        {"theta_rad", map.theta_actual},
        {"counts", rows},
        {"mean_rate_hz", rates},
    };
    return root.dump(2) + "\n";
}

std::string wigner_to_csv(const WignerMap& map) {
    std::string out = "x_m,k_radpm,w\n";
    for (std::size_t i = 0; i < map.nx(); ++i) {
        for (std::size_t j = 0; j < map.nk(); ++j) {
            out += fmt_double(map.x_axis[i]);
            out += ',';
            out += fmt_double(map.k_axis[j]);
            out += ',';
            out += fmt_double(map.at(i, j));
            out += '\n';
        }
    }
    return out;
}

WignerMap wigner_from_csv(const std::string& csv_text) {
    const auto lines = split_lines(csv_text);
    if (lines.empty() || lines[0] != "x_m,k_radpm,w") {
        throw std::runtime_error("wigner CSV: missing header x_m,k_radpm,w");
    }
    std::vector<double> xs, ks, vals;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        const auto f = split_fields(lines[li]);
        if (f.size() != 3) {
            std::ostringstream os;
            os << "wigner CSV line " << li + 1 << ": expected 3 fields, found " << f.size();
            throw std::runtime_error(os.str());
        }
        xs.push_back(parse_double(f[0], "x_m", li + 1));
        ks.push_back(parse_double(f[1], "k_radpm", li + 1));
        vals.push_back(parse_double(f[2], "w", li + 1));
    }
    if (vals.empty()) throw std::runtime_error("wigner CSV: no data rows");

    // The k axis repeats for every x block; find the block length.
    std::size_t nk = 1;
    while (nk < ks.size() && ks[nk] > ks[nk - 1]) ++nk;
    if (ks.size() % nk != 0) {
        throw std::runtime_error("wigner CSV: ragged raster (row count not divisible by the "
                                 "k-block length)");
    }
    const std::size_t nx = ks.size() / nk;
    std::vector<double> x_axis(nx), k_axis(ks.begin(), ks.begin() + static_cast<long>(nk));
    for (std::size_t i = 0; i < nx; ++i) {
        x_axis[i] = xs[i * nk];
        for (std::size_t j = 0; j < nk; ++j) {
            if (xs[i * nk + j] != x_axis[i] || ks[i * nk + j] != k_axis[j]) {
                throw std::runtime_error(
                    "wigner CSV: coordinates do not form a consistent x-major raster");
            }
        }
    }
    WignerMap map;
    map.x_axis = Axis(std::move(x_axis));
    map.k_axis = Axis(std::move(k_axis));
    map.values = std::move(vals);
    return map;
}

std::string report_to_json(const ReconstructionReport& report) {
    json wig_rows = json::array();
    for (std::size_t i = 0; i < report.wigner.nx(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < report.wigner.nk(); ++j) {
            row.push_back(report.wigner.at(i, j));
        }
        wig_rows.push_back(std::move(row));
    }
    const json root = {
        {"background_counts", report.background_counts},
        {"scale", report.scale},
        {"plateau_residual", report.plateau_residual},
        {"warnings", report.warnings},
        {"features", features_to_json(report.features)},
        {"wigner",
         {{"x_m", report.wigner.x_axis.pts},
          {"k_radpm", report.wigner.k_axis.pts},
          {"w", wig_rows}}},
    };
    return root.dump(2) + "\n";
}

}  // namespace sagwig
