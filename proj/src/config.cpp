#include "negmu/config.hpp"

#include "negmu/errors.hpp"
#include "json_io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace negmu {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& prefix, std::initializer_list<std::string_view> known) {
    for (const auto& [key, value] : obj.items()) {
        bool found = false;
        for (auto k : known) found = found || key == k;
        if (!found) throw ValidationError(prefix.empty() ? key : prefix + "." + key, "unknown key");
    }
}

const json* section(const json& root, const char* name) {
    const auto it = root.find(name);
    if (it == root.end()) return nullptr;
    if (!it->is_object()) throw ValidationError(name, "must be an object");
    return &*it;
}

void read_number(const json& obj, const std::string& prefix, const char* key, double& dst) {
    const auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_number()) throw ValidationError(prefix + "." + key, "must be a number");
    dst = it->get<double>();
}

void read_count(const json& obj, const std::string& prefix, const char* key, std::size_t& dst) {
    const auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_number_integer()) throw ValidationError(prefix + "." + key, "must be an integer");
    if (it->is_number_unsigned()) {
        dst = it->get<std::size_t>();
        return;
    }
    const auto v = it->get<std::int64_t>();
    if (v < 0) throw ValidationError(prefix + "." + key, "must be >= 2");
    dst = static_cast<std::size_t>(v);
}

} // namespace

std::string to_string(OutputFormat f) {
    switch (f) {
    case OutputFormat::csv: return "csv";
    case OutputFormat::json: return "json";
    case OutputFormat::ppm: return "ppm";
    }
    return "csv";
}

OutputFormat parse_output_format(std::string_view text, const std::string& key) {
    if (text == "csv") return OutputFormat::csv;
    if (text == "json") return OutputFormat::json;
    if (text == "ppm") return OutputFormat::ppm;
    throw ValidationError(key, "must be one of csv, json, ppm");
}

void validate(const SimulationConfig& config) {
    validate(config.rates);
    validate(config.drive);
    validate(config.medium);
    validate(config.grid);
}

SimulationConfig parse_config(std::string_view text) {
    json root;
    if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
        root = json::object();
    } else {
        try {
            root = json::parse(text.begin(), text.end());
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("malformed config: ") + e.what());
        }
    }
    if (!root.is_object()) throw ParseError("config document must be a JSON object");
    reject_unknown(root, "", {"description", "rates", "drive", "medium", "grid", "output"});

    SimulationConfig cfg;
    if (const auto it = root.find("description"); it != root.end()) {
        if (!it->is_string()) throw ValidationError("description", "must be a string");
        cfg.description = it->get<std::string>();
    }
    if (const json* s = section(root, "rates")) {
        reject_unknown(*s, "rates", {"gamma1", "gamma2", "gamma3", "gamma_scale"});
        read_number(*s, "rates", "gamma1", cfg.rates.gamma1);
        read_number(*s, "rates", "gamma2", cfg.rates.gamma2);
        read_number(*s, "rates", "gamma3", cfg.rates.gamma3);
        read_number(*s, "rates", "gamma_scale", cfg.rates.gamma_scale);
    }
    if (const json* s = section(root, "drive")) {
        reject_unknown(*s, "drive",
                       {"delta_p", "delta_c", "omega_b", "omega_c0", "phi_x", "phi_y", "wavelength"});
        read_number(*s, "drive", "delta_p", cfg.drive.delta_p);
        read_number(*s, "drive", "delta_c", cfg.drive.delta_c);
        read_number(*s, "drive", "omega_b", cfg.drive.omega_b);
        read_number(*s, "drive", "omega_c0", cfg.drive.omega_c0);
        read_number(*s, "drive", "phi_x", cfg.drive.phi_x);
        read_number(*s, "drive", "phi_y", cfg.drive.phi_y);
        read_number(*s, "drive", "wavelength", cfg.drive.wavelength);
    }
    if (const json* s = section(root, "medium")) {
        reject_unknown(*s, "medium", {"mu31", "density_n"});
        read_number(*s, "medium", "mu31", cfg.medium.mu31);
        read_number(*s, "medium", "density_n", cfg.medium.density_n);
    }
    // The grid window follows the wavelength unless given explicitly.
    cfg.grid = GridSpec::centered(cfg.drive.wavelength);
    if (const json* s = section(root, "grid")) {
        reject_unknown(*s, "grid", {"x_min", "x_max", "y_min", "y_max", "nx", "ny"});
        read_number(*s, "grid", "x_min", cfg.grid.x_min);
        read_number(*s, "grid", "x_max", cfg.grid.x_max);
        read_number(*s, "grid", "y_min", cfg.grid.y_min);
        read_number(*s, "grid", "y_max", cfg.grid.y_max);
        read_count(*s, "grid", "nx", cfg.grid.nx);
        read_count(*s, "grid", "ny", cfg.grid.ny);
    }
    if (const json* s = section(root, "output")) {
        reject_unknown(*s, "output", {"format", "path"});
        if (const auto it = s->find("format"); it != s->end()) {
            if (!it->is_string()) throw ValidationError("output.format", "must be a string");
            cfg.output.format = parse_output_format(it->get<std::string>());
        }
        if (const auto it = s->find("path"); it != s->end()) {
            if (!it->is_string()) throw ValidationError("output.path", "must be a string");
            cfg.output.path = it->get<std::string>();
        }
    }
    validate(cfg);
    return cfg;
}

std::string serialize_config(const SimulationConfig& config) {
    return config_to_json(config).dump(2) + "\n";
}

SimulationConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

} // namespace negmu
