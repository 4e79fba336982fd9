#pragma once

// JSON run configuration. Schema: docs/config-schema.md.

#include "negmu/atom_core.hpp"
#include "negmu/field_map.hpp"

#include <string>
#include <string_view>

namespace negmu {

enum class OutputFormat { csv, json, ppm };

std::string to_string(OutputFormat f);
/// Throws ValidationError(key) for anything but csv/json/ppm.
OutputFormat parse_output_format(std::string_view text, const std::string& key = "output.format");

struct OutputSpec {
    OutputFormat format = OutputFormat::csv;
    std::string path;  // empty: standard output

    bool operator==(const OutputSpec&) const = default;
};

struct SimulationConfig {
    std::string description;
    RateSet rates;
    DriveParams drive;
    MediumParams medium;
    GridSpec grid = GridSpec::centered(DriveParams{}.wavelength);
    OutputSpec output;

    bool operator==(const SimulationConfig&) const = default;
};

/// Parse a JSON document. Missing fields take their defaults; grid bounds not
/// given default to [-wavelength/2, wavelength/2]. An empty document yields
/// the full default configuration.
/// Throws ParseError on malformed JSON, ValidationError on unknown keys, wrong
/// types or out-of-range values.
SimulationConfig parse_config(std::string_view text);

/// Pretty-printed JSON with every field present, in schema order.
std::string serialize_config(const SimulationConfig& config);

/// Run every field check; throws ValidationError.
void validate(const SimulationConfig& config);

/// Read a file and parse it. Throws ParseError if the file cannot be read.
SimulationConfig load_config(const std::string& path);

} // namespace negmu
