#pragma once

// Serialization of maps, sweep tables and heatmaps. Every writer is
// deterministic: the same inputs give the same bytes.

#include "negmu/config.hpp"
#include "negmu/field_map.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace negmu {

/// Scientific notation with 9 digits after the point and a bare exponent,
/// e.g. 1.000000000e0, -2.500000000e-6. Non-finite values print as "nan".
std::string format_sci(double v);

/// Header `x,y,re_mu,im_mu,flag`, then one LF-terminated row per point with
/// y in the outer loop and x in the inner loop, both ascending.
std::string write_map_csv(const FieldMap& map);

/// Inverse of write_map_csv. Throws ParseError on malformed input.
FieldMap parse_map_csv(std::string_view text);

/// {"config", "grid", "values", "flags"} in that order; values are
/// [re, im] pairs in row-major order (x fastest), singular values are null.
std::string write_map_json(const FieldMap& map, const SimulationConfig& config);

struct HeatmapStyle {
    double vmin = -6.0;
    double vmax = 6.0;
};

/// Style spanning the finite Re mu_r range of the map (+-1 around a flat map).
HeatmapStyle auto_style(const FieldMap& map);

/// Binary P6 image, one pixel per grid point, top row = y_max. Diverging
/// blue-white-red colormap on Re mu_r, black for singular points.
/// Throws std::invalid_argument unless vmax > vmin.
std::string render_heatmap_ppm(const FieldMap& map, const HeatmapStyle& style);

/// Colour of one value under the heatmap colormap.
struct Rgb {
    unsigned char r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};
Rgb heatmap_color(double re_mu, const HeatmapStyle& style);

/// CSV table `<delta_p|delta_c>,min_re_mu,kind,quadrants,regions,singular_points,threshold`.
/// Quadrants are joined with ';'.
std::string write_sweep_csv(SweepAxis axis, const std::vector<SweepRow>& rows);

std::string format_report(const IsotropyReport& rep);
std::string format_report(const ExtremumReport& rep);

} // namespace negmu
