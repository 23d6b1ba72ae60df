#include "sagwig/cli_commands.hpp"

#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "sagwig/config.hpp"
#include "sagwig/io.hpp"

namespace sagwig {

namespace {

namespace fs = std::filesystem;

ExperimentConfig load_with_overrides(const CliOptions& opt) {
    if (opt.config_path.empty()) throw ConfigError("--config is required");
    ExperimentConfig cfg = load_config(opt.config_path);
    if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
    if (opt.seed) cfg.scan.seed = *opt.seed;
    if (opt.noiseless) cfg.scan.noiseless = true;
    return cfg;
}

void write_and_announce(const fs::path& path, const std::string& content) {
    atomic_write_file(path.string(), content);
    std::cout << "wrote " << path.string() << "\n";
}

}  // namespace

int cmd_simulate(const CliOptions& opt) {
    const ExperimentConfig cfg = load_with_overrides(opt);
    const EnsembleState state = make_state(cfg.field, cfg.grid);
    const CountMap map = run_scan(state, cfg.scan, cfg.detector, cfg.interferometer);
    const fs::path dir(cfg.out_dir);
    if (cfg.write_csv) write_and_announce(dir / "counts.csv", counts_to_csv(map));
    if (cfg.write_json) write_and_announce(dir / "counts.json", counts_to_json(map, cfg));
    return 0;
}

int cmd_reconstruct(const std::string& counts_csv_path, const CliOptions& opt) {
    const ExperimentConfig cfg = load_with_overrides(opt);
    const CountMap map = counts_from_csv(read_file(counts_csv_path), cfg);
    const double background =
        estimate_background(map, cfg.background_method, cfg.calibration_time);
    const ReconstructionReport report = reconstruct_wigner(map, background, cfg.field);
    for (const std::string& w : report.warnings) std::cerr << "warning: " << w << "\n";
    const fs::path dir(cfg.out_dir);
    if (cfg.write_csv) write_and_announce(dir / "wigner.csv", wigner_to_csv(report.wigner));
    if (cfg.write_json) write_and_announce(dir / "report.json", report_to_json(report));
    return 0;
}

int cmd_analytic(const CliOptions& opt) {
    const ExperimentConfig cfg = load_with_overrides(opt);
    if (cfg.field.kind == FieldKind::HermiteGauss) {
        throw ConfigError("field.kind: no closed form is registered for hermite_gauss");
    }
    // Evaluate on exactly the raster a reconstruction would produce: mirror
    // positions quantized to the field grid, k = k0 sin(theta).
    std::vector<double> xs(static_cast<std::size_t>(cfg.scan.x_points.n));
    for (int i = 0; i < cfg.scan.x_points.n; ++i) {
        const int s = shift_samples(cfg.grid, cfg.scan.x_points.position(i));
        xs[static_cast<std::size_t>(i)] = static_cast<double>(s) * cfg.grid.spacing;
    }
    std::vector<double> ks(static_cast<std::size_t>(cfg.scan.theta_points.n));
    for (int j = 0; j < cfg.scan.theta_points.n; ++j) {
        ks[static_cast<std::size_t>(j)] = tilt_to_wavevector(
            cfg.scan.theta_points.position(j), cfg.interferometer.wavelength);
    }
    WignerMap map;
    map.x_axis = Axis(xs);
    map.k_axis = Axis(ks);
    map.values.resize(xs.size() * ks.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < ks.size(); ++j) {
            map.values[i * ks.size() + j] = analytic_wigner(cfg.field, {xs[i], ks[j]});
        }
    }
    const fs::path dir(cfg.out_dir);
    write_and_announce(dir / "wigner_analytic.csv", wigner_to_csv(map));
    return 0;
}

int cmd_compare(const std::string& map_a_path, const std::string& map_b_path,
                double threshold) {
    const WignerMap a = wigner_from_csv(read_file(map_a_path));
    const WignerMap b = wigner_from_csv(read_file(map_b_path));
    const CompareMetrics m = compare_maps(a, b);
    std::cout << "l2_relative " << fmt_double(m.l2_relative) << "\n";
    std::cout << "pearson " << fmt_double(m.pearson) << "\n";
    std::cout << "peak_shift_x " << m.peak_shift_x << "\n";
    std::cout << "peak_shift_k " << m.peak_shift_k << "\n";
    return m.pearson >= threshold ? 0 : 3;
}

int run_cli(int argc, char** argv) {
    CLI::App app{
        "Raster-scanned single-photon interferometer simulator: generates count maps, "
        "reconstructs phase-space (Wigner) distributions from them, and compares maps."};
    app.require_subcommand(1);

    CliOptions opt;
    std::string counts_path, map_a, map_b;

    CLI::App* sim = app.add_subcommand("simulate", "Run the forward model and record counts");
    sim->add_option("--config", opt.config_path, "experiment config (JSON)")->required();
    sim->add_option("--out", opt.out_dir, "output directory (overrides config)");
    std::uint64_t seed_value = 0;
    CLI::Option* seed_opt =
        sim->add_option("--seed", seed_value, "override the scan RNG seed");
    sim->add_flag("--noiseless", opt.noiseless, "skip Poisson sampling");

    CLI::App* rec = app.add_subcommand("reconstruct", "Invert a recorded count map");
    rec->add_option("counts_csv", counts_path, "counts.csv from a simulate run")->required();
    rec->add_option("--config", opt.config_path, "experiment config (JSON)")->required();
    rec->add_option("--out", opt.out_dir, "output directory (overrides config)");
    rec->add_flag("--noiseless", opt.noiseless,
                  "treat the data as noiseless (exact calibration background)");

    CLI::App* ana = app.add_subcommand("analytic", "Closed-form map on the scan raster");
    ana->add_option("--config", opt.config_path, "experiment config (JSON)")->required();
    ana->add_option("--out", opt.out_dir, "output directory (overrides config)");

    CLI::App* cmp = app.add_subcommand("compare", "Compare two map CSVs");
    cmp->add_option("map_a", map_a, "first map CSV")->required();
    cmp->add_option("map_b", map_b, "second map CSV (reference)")->required();
    cmp->add_option("--threshold", opt.threshold, "minimum Pearson correlation for success");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (seed_opt->count() > 0) opt.seed = seed_value;
        if (sim->parsed()) return cmd_simulate(opt);
        if (rec->parsed()) return cmd_reconstruct(counts_path, opt);
        if (ana->parsed()) return cmd_analytic(opt);
        if (cmp->parsed()) return cmd_compare(map_a, map_b, opt.threshold);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace sagwig
