#include "negmu/cli.hpp"

#include "negmu/config.hpp"
#include "negmu/errors.hpp"
#include "negmu/field_map.hpp"
#include "negmu/oracle_suite.hpp"
#include "negmu/output.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace negmu {

namespace {

struct Override {
    const char* flag;
    double value = 0.0;
    CLI::Option* opt = nullptr;
};

struct Options {
    std::string config_path;
    std::string out_path;
    std::string format;
    CLI::Option* format_opt = nullptr;
    CLI::Option* out_opt = nullptr;

    // Physics and grid overrides, one per config field.
    std::vector<Override> overrides{
        {"--gamma1"}, {"--gamma2"}, {"--gamma3"}, {"--gamma-scale"}, {"--delta-p"},
        {"--delta-c"}, {"--omega-b"}, {"--omega-c0"}, {"--phi-x"}, {"--phi-y"},
        {"--wavelength"}, {"--mu31"}, {"--density-n"}, {"--x-min"}, {"--x-max"},
        {"--y-min"}, {"--y-max"}};
    std::size_t nx = 0, ny = 0;
    CLI::Option* nx_opt = nullptr;
    CLI::Option* ny_opt = nullptr;

    double x = 0.0, y = 0.0;
    CLI::Option* x_opt = nullptr;  // point
    CLI::Option* y_opt = nullptr;
    CLI::Option* center_x_opt = nullptr;  // profile
    CLI::Option* center_y_opt = nullptr;
    double radius = 0.0;
    CLI::Option* radius_opt = nullptr;
    std::size_t samples = 64;
    std::string axis = "probe";
    std::vector<double> values;
    std::size_t draws = 10000;
    std::uint64_t seed = OracleSuiteOptions{}.seed;
    double threshold = 0.0;
    CLI::Option* map_threshold_opt = nullptr;
    CLI::Option* sweep_threshold_opt = nullptr;
    double vmin = 0.0, vmax = 0.0;
    CLI::Option* vmin_opt = nullptr;
    CLI::Option* vmax_opt = nullptr;
    unsigned threads = 1;
};

double* field_for(SimulationConfig& c, std::string_view flag) {
    if (flag == "--gamma1") return &c.rates.gamma1;
    if (flag == "--gamma2") return &c.rates.gamma2;
    if (flag == "--gamma3") return &c.rates.gamma3;
    if (flag == "--gamma-scale") return &c.rates.gamma_scale;
    if (flag == "--delta-p") return &c.drive.delta_p;
    if (flag == "--delta-c") return &c.drive.delta_c;
    if (flag == "--omega-b") return &c.drive.omega_b;
    if (flag == "--omega-c0") return &c.drive.omega_c0;
    if (flag == "--phi-x") return &c.drive.phi_x;
    if (flag == "--phi-y") return &c.drive.phi_y;
    if (flag == "--wavelength") return &c.drive.wavelength;
    if (flag == "--mu31") return &c.medium.mu31;
    if (flag == "--density-n") return &c.medium.density_n;
    if (flag == "--x-min") return &c.grid.x_min;
    if (flag == "--x-max") return &c.grid.x_max;
    if (flag == "--y-min") return &c.grid.y_min;
    if (flag == "--y-max") return &c.grid.y_max;
    return nullptr;
}

// Defaults, then the config file, then command-line flags.
SimulationConfig resolve_config(const Options& o) {
    SimulationConfig cfg = o.config_path.empty() ? parse_config("") : load_config(o.config_path);
    for (const auto& ov : o.overrides) {
        if (ov.opt->count() > 0) *field_for(cfg, ov.flag) = ov.value;
    }
    if (o.nx_opt->count() > 0) cfg.grid.nx = o.nx;
    if (o.ny_opt->count() > 0) cfg.grid.ny = o.ny;
    if (o.format_opt->count() > 0) cfg.output.format = parse_output_format(o.format, "--format");
    if (o.out_opt->count() > 0) cfg.output.path = o.out_path;
    validate(cfg);
    return cfg;
}

void emit(const std::string& bytes, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << bytes;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open output file '" + path + "'");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw Error("failed writing '" + path + "'");
}

std::string cplx_str(cplx v) {
    std::ostringstream os;
    os << std::setprecision(10) << v.real() << (v.imag() < 0 ? " - " : " + ") << std::abs(v.imag()) << "i";
    return os.str();
}

// Wrap into [-wavelength/2, wavelength/2).
double wrap(double v, double wavelength) {
    return v - wavelength * std::floor(v / wavelength + 0.5);
}

int run_point(const Options& o, std::ostream& out, std::ostream& err) {
    const SimulationConfig cfg = resolve_config(o);
    try {
        const PointResult p = evaluate_point(o.x, o.y, cfg.drive, cfg.rates, cfg.medium);
        if (!is_physical(p.coherences)) err << "warning: |rho| > 1, probe is not weak for these parameters\n";
        out << std::setprecision(10);
        out << "x        = " << o.x << " m\n"
            << "y        = " << o.y << " m\n"
            << "omega_c  = " << p.omega_c << " gamma\n"
            << "rho31    = " << cplx_str(p.coherences.rho31) << "\n"
            << "rho21    = " << cplx_str(p.coherences.rho21) << "\n"
            << "chi      = " << cplx_str(p.chi) << " m^3\n"
            << "N*chi    = " << cplx_str(p.n_chi) << "\n"
            << "mu_r     = " << cplx_str(p.mu_r) << "\n";
    } catch (const SingularityError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidationFailed;
    }
    return kExitOk;
}

int run_map(const Options& o, std::ostream& out, std::ostream& err) {
    const SimulationConfig cfg = resolve_config(o);
    const FieldMap map = scan_grid(cfg.grid, cfg.drive, cfg.rates, cfg.medium, o.threads);

    std::string bytes;
    switch (cfg.output.format) {
    case OutputFormat::csv: bytes = write_map_csv(map); break;
    case OutputFormat::json: bytes = write_map_json(map, cfg); break;
    case OutputFormat::ppm: {
        HeatmapStyle style = auto_style(map);
        if (o.vmin_opt->count() > 0) style.vmin = o.vmin;
        if (o.vmax_opt->count() > 0) style.vmax = o.vmax;
        if (!(style.vmax > style.vmin)) throw ValidationError("--vmax", "must exceed vmin");
        bytes = render_heatmap_ppm(map, style);
        break;
    }
    }
    emit(bytes, cfg.output.path, out);

    if (map.singular_count() > 0) err << "warning: " << map.singular_count() << " singular points flagged\n";
    // Summary only when the map itself did not go to stdout.
    if (!cfg.output.path.empty() && cfg.output.path != "-") {
        const std::optional<double> thr =
            o.map_threshold_opt->count() > 0 ? std::optional<double>(o.threshold) : adaptive_threshold(map);
        if (const auto range = real_range(map)) {
            out << "Re mu_r range [" << range->first << ", " << range->second << "]\n";
        }
        if (thr) {
            for (const auto& e : find_extrema(map, *thr)) out << format_report(e) << "\n";
        }
    }
    return kExitOk;
}

int run_profile(const Options& o, std::ostream& out) {
    const SimulationConfig cfg = resolve_config(o);
    const double lambda = cfg.drive.wavelength;
    const double k = 2.0 * constants::pi / lambda;
    // Default centre: the antinode sin(kx + phi_x) = sin(ky + phi_y) = 1.
    Point2 c{wrap((0.5 * constants::pi - cfg.drive.phi_x) / k, lambda),
             wrap((0.5 * constants::pi - cfg.drive.phi_y) / k, lambda)};
    if (o.center_x_opt->count() > 0) c.x = o.x;
    if (o.center_y_opt->count() > 0) c.y = o.y;
    const double radius = o.radius_opt->count() > 0 ? o.radius : 0.02 * lambda;
    if (!(radius > 0.0)) throw ValidationError("--radius", "must be > 0");
    if (o.samples < 16) throw ValidationError("--samples", "must be >= 16");
    out << format_report(isotropy_profile(cfg.drive, cfg.rates, cfg.medium, c, radius, o.samples));
    return kExitOk;
}

int run_sweep(const Options& o, std::ostream& out) {
    const SimulationConfig cfg = resolve_config(o);
    if (o.values.empty()) throw ValidationError("--values", "needs at least one detuning");
    const SweepAxis axis = o.axis == "coupling" ? SweepAxis::coupling : SweepAxis::probe;
    std::optional<double> thr;
    if (o.sweep_threshold_opt->count() > 0) {
        if (!(o.threshold < 0.0)) throw ValidationError("--threshold", "must be negative");
        thr = o.threshold;
    }
    const auto rows = sweep_detuning(axis, o.values, {cfg.drive, cfg.rates, cfg.medium, cfg.grid}, thr, o.threads);
    emit(write_sweep_csv(axis, rows), cfg.output.path, out);
    return kExitOk;
}

int run_validate(const Options& o, std::ostream& out) {
    (void)resolve_config(o);
    OracleSuiteOptions opts;
    opts.draws = o.draws;
    opts.seed = o.seed;
    const OracleSuiteResult r = run_oracle_suite(opts);
    const double limit = 1e-7;
    out << std::setprecision(4);
    out << "draws                        " << r.draws << "\n"
        << "max rel dev closed vs linear " << r.max_closed_vs_linear << "\n"
        << "max rel dev settle vs linear " << r.max_settle_vs_linear << "\n"
        << "max rel dev settle vs closed " << r.max_settle_vs_closed << "\n"
        << "not settled                  " << r.not_settled << "\n"
        << "singular draws               " << r.singular << "\n"
        << "rk4 steps                    " << r.total_steps << "\n"
        << "elapsed                      " << r.seconds << " s\n";
    const bool pass = r.max_deviation() < limit && r.not_settled == 0;
    out << (pass ? "PASS" : "FAIL") << " (limit " << limit << ")\n";
    return pass ? kExitOk : kExitValidationFailed;
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Negative magnetic permeability maps of a Lambda-type three-level atomic medium", "negmu"};
    app.require_subcommand(1);
    app.fallthrough();

    Options o;
    app.add_option("--config", o.config_path, "JSON configuration file");
    o.out_opt = app.add_option("--out", o.out_path, "Output path ('-' for stdout)");
    o.format_opt = app.add_option("--format", o.format, "Map output format")
                       ->check(CLI::IsMember({"csv", "json", "ppm"}));
    for (auto& ov : o.overrides) ov.opt = app.add_option(ov.flag, ov.value);
    o.nx_opt = app.add_option("--nx", o.nx, "Grid points along x");
    o.ny_opt = app.add_option("--ny", o.ny, "Grid points along y");
    app.add_option("--threads", o.threads, "Worker threads for grid scans")->check(CLI::Range(1u, 1024u));

    auto* point = app.add_subcommand("point", "Evaluate chi and mu_r at one position");
    o.x_opt = point->add_option("--x", o.x, "x position (m)");
    o.y_opt = point->add_option("--y", o.y, "y position (m)");

    auto* map = app.add_subcommand("map", "Scan mu_r over the grid and write csv/json/ppm");
    o.map_threshold_opt = map->add_option("--threshold", o.threshold, "Extremum threshold on Re mu_r (< 0)");
    o.vmin_opt = map->add_option("--vmin", o.vmin, "Heatmap lower clamp");
    o.vmax_opt = map->add_option("--vmax", o.vmax, "Heatmap upper clamp");

    auto* profile = app.add_subcommand("profile", "Angular spread of Re mu_r on a circle");
    o.center_x_opt = profile->add_option("--x", o.x, "Circle centre x (m)");
    o.center_y_opt = profile->add_option("--y", o.y, "Circle centre y (m)");
    o.radius_opt = profile->add_option("--radius", o.radius, "Circle radius (m), default 0.02 wavelength");
    profile->add_option("--samples", o.samples, "Angles on the circle (>= 16)");

    auto* sweep = app.add_subcommand("sweep", "Detuning sweep of the Re mu_r minimum");
    sweep->add_option("--axis", o.axis, "Detuning to sweep")->check(CLI::IsMember({"probe", "coupling"}));
    sweep->add_option("--values", o.values, "Comma-separated detunings (gamma)")->delimiter(',')->required();
    o.sweep_threshold_opt = sweep->add_option("--threshold", o.threshold, "Extremum threshold on Re mu_r (< 0)");

    auto* validate_cmd = app.add_subcommand("validate", "Cross-check closed form, linear solve and RK4");
    validate_cmd->add_option("--draws", o.draws, "Random parameter draws");
    validate_cmd->add_option("--seed", o.seed, "RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (point->parsed()) return run_point(o, out, err);
        if (map->parsed()) return run_map(o, out, err);
        if (profile->parsed()) return run_profile(o, out);
        if (sweep->parsed()) return run_sweep(o, out);
        if (validate_cmd->parsed()) return run_validate(o, out);
    } catch (const ParseError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const ValidationError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidationFailed;
    }
    return kExitConfigError;
}

} // namespace negmu
