#include "negmu/output.hpp"

#include "json_io.hpp"
#include "negmu/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace negmu {

using nlohmann::ordered_json;

ordered_json config_to_json(const SimulationConfig& c) {
    ordered_json j;
    j["description"] = c.description;
    j["rates"] = {{"gamma1", c.rates.gamma1},
                  {"gamma2", c.rates.gamma2},
                  {"gamma3", c.rates.gamma3},
                  {"gamma_scale", c.rates.gamma_scale}};
    j["drive"] = {{"delta_p", c.drive.delta_p},   {"delta_c", c.drive.delta_c}, {"omega_b", c.drive.omega_b},
                  {"omega_c0", c.drive.omega_c0}, {"phi_x", c.drive.phi_x},     {"phi_y", c.drive.phi_y},
                  {"wavelength", c.drive.wavelength}};
    j["medium"] = {{"mu31", c.medium.mu31}, {"density_n", c.medium.density_n}};
    j["grid"] = {{"x_min", c.grid.x_min}, {"x_max", c.grid.x_max}, {"y_min", c.grid.y_min},
                 {"y_max", c.grid.y_max}, {"nx", c.grid.nx},       {"ny", c.grid.ny}};
    j["output"] = {{"format", to_string(c.output.format)}, {"path", c.output.path}};
    return j;
}

std::string format_sci(double v) {
    if (!std::isfinite(v)) return "nan";
    if (v == 0.0) v = 0.0;  // drop the sign of -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9e", v);
    std::string s(buf);
    // "e+05" -> "e5", "e-06" -> "e-6", "e+00" -> "e0"
    const auto e = s.find('e');
    std::string mant = s.substr(0, e);
    const char sign = s[e + 1];
    std::string digits = s.substr(e + 2);
    const auto nz = digits.find_first_not_of('0');
    digits = nz == std::string::npos ? "0" : digits.substr(nz);
    return mant + "e" + (sign == '-' ? "-" : "") + digits;
}

std::string write_map_csv(const FieldMap& map) {
    std::string out = "x,y,re_mu,im_mu,flag\n";
    out.reserve(out.size() + map.values.size() * 72);
    for (std::size_t j = 0; j < map.grid.ny; ++j) {
        for (std::size_t i = 0; i < map.grid.nx; ++i) {
            const std::size_t k = map.index(i, j);
            const bool ok = map.flags[k] == PointFlag::ok;
            out += format_sci(map.xs[i]);
            out += ',';
            out += format_sci(map.ys[j]);
            out += ',';
            out += ok ? format_sci(map.values[k].real()) : "nan";
            out += ',';
            out += ok ? format_sci(map.values[k].imag()) : "nan";
            out += ok ? ",ok\n" : ",singular\n";
        }
    }
    return out;
}

namespace {

double parse_double(const std::string& field, std::size_t line) {
    if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size()) {
        throw ParseError("csv line " + std::to_string(line) + ": bad number '" + field + "'");
    }
    return v;
}

} // namespace

FieldMap parse_map_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != "x,y,re_mu,im_mu,flag") throw ParseError("csv: missing header");

    std::vector<double> x, y;
    FieldMap map;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        if (f.size() != 5) throw ParseError("csv line " + std::to_string(lineno) + ": expected 5 fields");
        x.push_back(parse_double(f[0], lineno));
        y.push_back(parse_double(f[1], lineno));
        const double re = parse_double(f[2], lineno);
        const double im = parse_double(f[3], lineno);
        if (f[4] == "ok") {
            map.flags.push_back(PointFlag::ok);
        } else if (f[4] == "singular") {
            map.flags.push_back(PointFlag::singular);
        } else {
            throw ParseError("csv line " + std::to_string(lineno) + ": bad flag '" + f[4] + "'");
        }
        map.values.emplace_back(re, im);
    }
    if (x.empty()) throw ParseError("csv: no data rows");

    std::size_t nx = 0;
    while (nx < y.size() && y[nx] == y[0]) ++nx;
    if (nx < 2 || x.size() % nx != 0) throw ParseError("csv: rows do not form a rectangular grid");
    const std::size_t ny = x.size() / nx;
    if (ny < 2) throw ParseError("csv: rows do not form a rectangular grid");
    map.xs.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(nx));
    for (std::size_t j = 0; j < ny; ++j) {
        map.ys.push_back(y[j * nx]);
        for (std::size_t i = 0; i < nx; ++i) {
            if (x[j * nx + i] != map.xs[i] || y[j * nx + i] != map.ys[j]) {
                throw ParseError("csv: rows do not form a rectangular grid");
            }
        }
    }
    map.grid = {map.xs.front(), map.xs.back(), map.ys.front(), map.ys.back(), nx, ny};
    return map;
}

std::string write_map_json(const FieldMap& map, const SimulationConfig& config) {
    ordered_json j;
    j["config"] = config_to_json(config);
    j["grid"] = {{"x_min", map.grid.x_min}, {"x_max", map.grid.x_max}, {"y_min", map.grid.y_min},
                 {"y_max", map.grid.y_max}, {"nx", map.grid.nx},       {"ny", map.grid.ny}};
    auto values = ordered_json::array();
    auto flags = ordered_json::array();
    for (std::size_t k = 0; k < map.values.size(); ++k) {
        const bool ok = map.flags[k] == PointFlag::ok;
        if (ok) {
            values.push_back({map.values[k].real(), map.values[k].imag()});
        } else {
            values.push_back({nullptr, nullptr});
        }
        flags.push_back(ok ? "ok" : "singular");
    }
    j["values"] = std::move(values);
    j["flags"] = std::move(flags);
    return j.dump() + "\n";
}

HeatmapStyle auto_style(const FieldMap& map) {
    const auto range = real_range(map);
    if (!range) return {};
    if (range->second > range->first) return {range->first, range->second};
    return {range->first - 1.0, range->first + 1.0};
}

Rgb heatmap_color(double re_mu, const HeatmapStyle& style) {
    if (!std::isfinite(re_mu)) return {0, 0, 0};
    const double t = std::clamp((re_mu - style.vmin) / (style.vmax - style.vmin), 0.0, 1.0);
    auto channel = [](double blend) { return static_cast<unsigned char>(std::floor(255.0 * blend + 0.5)); };
    if (t <= 0.5) {
        const double s = 2.0 * t;  // blue -> white
        return {channel(s), channel(s), 255};
    }
    const double s = 2.0 * t - 1.0;  // white -> red
    return {255, channel(1.0 - s), channel(1.0 - s)};
}

std::string render_heatmap_ppm(const FieldMap& map, const HeatmapStyle& style) {
    if (!(style.vmax > style.vmin)) throw std::invalid_argument("heatmap: vmax must exceed vmin");
    std::string out = "P6\n" + std::to_string(map.grid.nx) + " " + std::to_string(map.grid.ny) + "\n255\n";
    out.reserve(out.size() + 3 * map.values.size());
    for (std::size_t row = 0; row < map.grid.ny; ++row) {
        const std::size_t j = map.grid.ny - 1 - row;
        for (std::size_t i = 0; i < map.grid.nx; ++i) {
            const std::size_t k = map.index(i, j);
            const Rgb c = map.flags[k] == PointFlag::ok ? heatmap_color(map.values[k].real(), style) : Rgb{};
            out += static_cast<char>(c.r);
            out += static_cast<char>(c.g);
            out += static_cast<char>(c.b);
        }
    }
    return out;
}

std::string write_sweep_csv(SweepAxis axis, const std::vector<SweepRow>& rows) {
    std::string out = axis == SweepAxis::probe ? "delta_p" : "delta_c";
    out += ",min_re_mu,kind,quadrants,regions,singular_points,threshold\n";
    for (const auto& r : rows) {
        std::string quads;
        for (std::size_t q = 0; q < r.quadrants.size(); ++q) {
            if (q != 0) quads += ';';
            quads += to_string(r.quadrants[q]);
        }
        out += format_sci(r.detuning) + "," + (r.min_re_mu ? format_sci(*r.min_re_mu) : "nan") + "," +
               (r.kind ? to_string(*r.kind) : "none") + "," + (quads.empty() ? "none" : quads) + "," +
               std::to_string(r.regions) + "," + std::to_string(r.singular_points) + "," +
               format_sci(r.threshold) + "\n";
    }
    return out;
}

std::string format_report(const IsotropyReport& rep) {
    std::ostringstream os;
    os << std::setprecision(10);
    os << "center          = (" << rep.center.x << ", " << rep.center.y << ") m\n"
       << "radius          = " << rep.radius << " m\n"
       << "samples         = " << rep.samples << " (" << rep.singular_samples << " singular)\n"
       << "mean Re mu_r    = " << rep.mean << "\n"
       << "min Re mu_r     = " << rep.min << "\n"
       << "max Re mu_r     = " << rep.max << "\n"
       << "spread          = " << rep.spread << "\n"
       << "relative spread = " << rep.relative_spread << "\n";
    return os.str();
}

std::string format_report(const ExtremumReport& rep) {
    std::ostringstream os;
    os << std::setprecision(6);
    os << to_string(rep.kind) << " quadrant " << to_string(rep.quadrant) << ": min Re mu_r = " << rep.value
       << " at (" << rep.position.x << ", " << rep.position.y << ") m, center (" << rep.center.x << ", "
       << rep.center.y << ") m, center Re mu_r = " << rep.center_value;
    if (rep.crater_radius) os << ", crater radius " << *rep.crater_radius << " m";
    os << ", " << rep.region_size << " points";
    return os.str();
}

} // namespace negmu
