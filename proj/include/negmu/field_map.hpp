#pragma once

// Spatial scans of mu_r over the x-y plane and the analyses run on them:
// negative-extremum detection, local isotropy, mirror transform and
// detuning sweeps.

#include "negmu/atom_core.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace negmu {

struct GridSpec {
    double x_min = -2e-6;
    double x_max = 2e-6;
    double y_min = -2e-6;
    double y_max = 2e-6;
    std::size_t nx = 201;
    std::size_t ny = 201;

    bool operator==(const GridSpec&) const = default;

    /// Window [-lambda/2, lambda/2]^2 with n x n points.
    static GridSpec centered(double wavelength, std::size_t n = 201);

    double dx() const noexcept { return (x_max - x_min) / static_cast<double>(nx - 1); }
    double dy() const noexcept { return (y_max - y_min) / static_cast<double>(ny - 1); }
    double x_at(std::size_t i) const noexcept;
    double y_at(std::size_t j) const noexcept;
};

/// Throws ValidationError naming the offending field.
void validate(const GridSpec& grid);

enum class PointFlag : std::uint8_t { ok, singular };

/// Row-major lattice of mu_r values: index j * nx + i, x varies fastest.
struct FieldMap {
    GridSpec grid;
    std::vector<double> xs;  // length nx
    std::vector<double> ys;  // length ny
    std::vector<cplx> values;
    std::vector<PointFlag> flags;

    std::size_t index(std::size_t i, std::size_t j) const noexcept { return j * grid.nx + i; }
    const cplx& at(std::size_t i, std::size_t j) const { return values[index(i, j)]; }
    bool ok(std::size_t i, std::size_t j) const { return flags[index(i, j)] == PointFlag::ok; }
    std::size_t singular_count() const noexcept;
};

/// Evaluate permeability_at_point on every lattice node. Singular points are
/// flagged (value NaN) rather than fatal. `threads` > 1 splits rows across
/// worker threads; the result is bit-identical to a sequential scan.
FieldMap scan_grid(const GridSpec& grid, const DriveParams& drive, const RateSet& rates,
                   const MediumParams& medium, unsigned threads = 1);

enum class ExtremumKind { spike, crater };
enum class Quadrant { I, II, III, IV, axis };

std::string to_string(ExtremumKind k);
std::string to_string(Quadrant q);

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// One connected region of Re mu_r < threshold.
///
/// `position`/`value` is the region's minimum. `center` is the pattern centre:
/// the minimum itself for a spike, the enclosed local maximum for a crater.
/// The quadrant is taken from the centre.
struct ExtremumReport {
    Point2 position;
    double value = 0.0;
    ExtremumKind kind = ExtremumKind::spike;
    std::optional<double> crater_radius;
    Quadrant quadrant = Quadrant::axis;
    Point2 center;
    double center_value = 0.0;
    std::size_t region_size = 0;
};

/// Crater when the enclosed maximum exceeds the rim minimum by more than this
/// fraction of |rim minimum|.
inline constexpr double kCraterContrast = 0.05;

/// Connected (8-neighbour) regions with Re mu_r < threshold, in row-major
/// discovery order. Requires threshold < 0 (std::invalid_argument otherwise).
/// Returns an empty list when nothing lies below the threshold.
std::vector<ExtremumReport> find_extrema(const FieldMap& map, double threshold);

/// Threshold that separates the negative features from the background:
/// min(midpoint of the Re mu_r range, half the minimum). nullopt when the map
/// has no negative value.
std::optional<double> adaptive_threshold(const FieldMap& map);

struct IsotropyReport {
    Point2 center;
    double radius = 0.0;
    std::size_t samples = 0;
    std::size_t singular_samples = 0;
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    double spread = 0.0;
    double relative_spread = 0.0;  // spread / |mean|
};

/// Re mu_r on `samples` equally spaced points of a circle around `center`,
/// evaluated exactly (no interpolation). Requires samples >= 16, radius > 0.
IsotropyReport isotropy_profile(const DriveParams& drive, const RateSet& rates, const MediumParams& medium,
                                Point2 center, double radius, std::size_t samples);

/// Reindex x -> -x. Throws AsymmetricGrid unless x_min = -x_max and nx is odd.
FieldMap mirror_map_x(const FieldMap& map);

enum class SweepAxis { probe, coupling };

std::string to_string(SweepAxis a);

struct SweepRow {
    double detuning = 0.0;
    std::optional<double> min_re_mu;          // nullopt if every point was singular
    std::optional<ExtremumKind> kind;         // kind of the deepest region
    std::vector<Quadrant> quadrants;          // one per region
    std::size_t regions = 0;
    std::size_t singular_points = 0;
    double threshold = 0.0;
};

struct SweepBase {
    DriveParams drive;
    RateSet rates;
    MediumParams medium;
    GridSpec grid;
};

/// For each detuning: scan the grid, detect extrema and report the global
/// minimum of Re mu_r. With no explicit threshold the adaptive one is used.
/// Throws std::invalid_argument on an empty list.
std::vector<SweepRow> sweep_detuning(SweepAxis axis, const std::vector<double>& values, const SweepBase& base,
                                     std::optional<double> threshold = std::nullopt, unsigned threads = 1);

/// Finite minimum / maximum of Re mu_r; nullopt when all points are singular.
std::optional<std::pair<double, double>> real_range(const FieldMap& map);

} // namespace negmu
