#include "negmu/field_map.hpp"

#include "negmu/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <thread>

namespace negmu {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void scan_rows(FieldMap& map, std::size_t j_begin, std::size_t j_end, const DriveParams& drive,
               const RateSet& rates, const MediumParams& medium) {
    const std::size_t nx = map.grid.nx;
    for (std::size_t j = j_begin; j < j_end; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            const std::size_t k = j * nx + i;
            try {
                map.values[k] = permeability_at_point(map.xs[i], map.ys[j], drive, rates, medium);
                map.flags[k] = PointFlag::ok;
            } catch (const SingularityError&) {
                map.values[k] = {kNaN, kNaN};
                map.flags[k] = PointFlag::singular;
            }
        }
    }
}

Quadrant quadrant_of(Point2 p, double dx, double dy) {
    if (std::abs(p.x) < dx || std::abs(p.y) < dy) return Quadrant::axis;
    if (p.x > 0) return p.y > 0 ? Quadrant::I : Quadrant::IV;
    return p.y > 0 ? Quadrant::II : Quadrant::III;
}

} // namespace

GridSpec GridSpec::centered(double wavelength, std::size_t n) {
    return {-0.5 * wavelength, 0.5 * wavelength, -0.5 * wavelength, 0.5 * wavelength, n, n};
}

double GridSpec::x_at(std::size_t i) const noexcept {
    return x_min + (x_max - x_min) * static_cast<double>(i) / static_cast<double>(nx - 1);
}

double GridSpec::y_at(std::size_t j) const noexcept {
    return y_min + (y_max - y_min) * static_cast<double>(j) / static_cast<double>(ny - 1);
}

void validate(const GridSpec& grid) {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(grid.x_min)) throw ValidationError("grid.x_min", "must be finite");
    if (!finite(grid.x_max) || !(grid.x_max > grid.x_min)) throw ValidationError("grid.x_max", "must exceed x_min");
    if (!finite(grid.y_min)) throw ValidationError("grid.y_min", "must be finite");
    if (!finite(grid.y_max) || !(grid.y_max > grid.y_min)) throw ValidationError("grid.y_max", "must exceed y_min");
    if (grid.nx < 2) throw ValidationError("grid.nx", "must be >= 2");
    if (grid.ny < 2) throw ValidationError("grid.ny", "must be >= 2");
}

std::size_t FieldMap::singular_count() const noexcept {
    return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), PointFlag::singular));
}

FieldMap scan_grid(const GridSpec& grid, const DriveParams& drive, const RateSet& rates,
                   const MediumParams& medium, unsigned threads) {
    validate(grid);
    FieldMap map;
    map.grid = grid;
    map.xs.resize(grid.nx);
    map.ys.resize(grid.ny);
    for (std::size_t i = 0; i < grid.nx; ++i) map.xs[i] = grid.x_at(i);
    for (std::size_t j = 0; j < grid.ny; ++j) map.ys[j] = grid.y_at(j);
    map.values.assign(grid.nx * grid.ny, cplx{});
    map.flags.assign(grid.nx * grid.ny, PointFlag::ok);

    const std::size_t workers = std::clamp<std::size_t>(threads, 1, grid.ny);
    if (workers == 1) {
        scan_rows(map, 0, grid.ny, drive, rates, medium);
        return map;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (grid.ny + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t b = w * chunk;
        const std::size_t e = std::min(grid.ny, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&map, b, e, &drive, &rates, &medium] { scan_rows(map, b, e, drive, rates, medium); });
    }
    for (auto& t : pool) t.join();
    return map;
}

std::string to_string(ExtremumKind k) {
    return k == ExtremumKind::crater ? "crater" : "spike";
}

std::string to_string(Quadrant q) {
    switch (q) {
    case Quadrant::I: return "I";
    case Quadrant::II: return "II";
    case Quadrant::III: return "III";
    case Quadrant::IV: return "IV";
    case Quadrant::axis: return "axis";
    }
    return "axis";
}

std::string to_string(SweepAxis a) {
    return a == SweepAxis::probe ? "probe" : "coupling";
}

std::optional<std::pair<double, double>> real_range(const FieldMap& map) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t k = 0; k < map.values.size(); ++k) {
        if (map.flags[k] != PointFlag::ok) continue;
        const double v = map.values[k].real();
        if (!std::isfinite(v)) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (lo > hi) return std::nullopt;
    return std::pair{lo, hi};
}

std::optional<double> adaptive_threshold(const FieldMap& map) {
    const auto range = real_range(map);
    if (!range || !(range->first < 0.0)) return std::nullopt;
    const double mid = 0.5 * (range->first + range->second);
    return std::min(mid, 0.5 * range->first);
}

std::vector<ExtremumReport> find_extrema(const FieldMap& map, double threshold) {
    if (!(threshold < 0.0)) throw std::invalid_argument("find_extrema: threshold must be negative");

    const std::size_t nx = map.grid.nx;
    const std::size_t ny = map.grid.ny;
    const std::size_t n = nx * ny;
    const double dx = map.grid.dx();
    const double dy = map.grid.dy();

    std::vector<char> below(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
        below[k] = map.flags[k] == PointFlag::ok && map.values[k].real() < threshold;
    }

    constexpr int kNone = -1;
    std::vector<int> label(n, kNone);
    std::vector<ExtremumReport> out;
    std::vector<std::size_t> members;
    std::deque<std::size_t> queue;

    for (std::size_t seed = 0; seed < n; ++seed) {
        if (!below[seed] || label[seed] != kNone) continue;
        const int id = static_cast<int>(out.size());

        // 8-connected flood fill of the region.
        members.clear();
        label[seed] = id;
        queue.push_back(seed);
        while (!queue.empty()) {
            const std::size_t k = queue.front();
            queue.pop_front();
            members.push_back(k);
            const std::size_t i = k % nx;
            const std::size_t j = k / nx;
            for (int dj = -1; dj <= 1; ++dj) {
                for (int di = -1; di <= 1; ++di) {
                    if (di == 0 && dj == 0) continue;
                    const auto ii = static_cast<std::ptrdiff_t>(i) + di;
                    const auto jj = static_cast<std::ptrdiff_t>(j) + dj;
                    if (ii < 0 || jj < 0 || ii >= static_cast<std::ptrdiff_t>(nx) ||
                        jj >= static_cast<std::ptrdiff_t>(ny)) {
                        continue;
                    }
                    const std::size_t kk = static_cast<std::size_t>(jj) * nx + static_cast<std::size_t>(ii);
                    if (below[kk] && label[kk] == kNone) {
                        label[kk] = id;
                        queue.push_back(kk);
                    }
                }
            }
        }

        ExtremumReport rep;
        rep.region_size = members.size();
        std::size_t k_min = members.front();
        std::size_t i0 = nx, i1 = 0, j0 = ny, j1 = 0;
        double si = 0.0, sj = 0.0;
        for (std::size_t k : members) {
            if (map.values[k].real() < map.values[k_min].real() ||
                (map.values[k].real() == map.values[k_min].real() && k < k_min)) {
                k_min = k;
            }
            const std::size_t i = k % nx;
            const std::size_t j = k / nx;
            i0 = std::min(i0, i);
            i1 = std::max(i1, i);
            j0 = std::min(j0, j);
            j1 = std::max(j1, j);
            si += static_cast<double>(i);
            sj += static_cast<double>(j);
        }
        rep.value = map.values[k_min].real();
        rep.position = {map.xs[k_min % nx], map.ys[k_min / nx]};
        rep.center = rep.position;
        rep.center_value = rep.value;

        // A crater is a ring: the region's centroid falls in an enclosed hole
        // whose maximum sits clearly above the rim minimum.
        const auto ic = static_cast<std::size_t>(std::lround(si / static_cast<double>(members.size())));
        const auto jc = static_cast<std::size_t>(std::lround(sj / static_cast<double>(members.size())));
        const std::size_t kc = jc * nx + ic;
        if (label[kc] != id) {
            std::vector<char> seen(n, 0);
            bool enclosed = true;
            std::size_t k_hole_max = kc;
            queue.clear();
            queue.push_back(kc);
            seen[kc] = 1;
            while (!queue.empty() && enclosed) {
                const std::size_t k = queue.front();
                queue.pop_front();
                const std::size_t i = k % nx;
                const std::size_t j = k / nx;
                if (i <= i0 || i >= i1 || j <= j0 || j >= j1) {
                    enclosed = false;
                    break;
                }
                if (map.flags[k] == PointFlag::ok &&
                    (map.flags[k_hole_max] != PointFlag::ok ||
                     map.values[k].real() > map.values[k_hole_max].real())) {
                    k_hole_max = k;
                }
                const std::size_t nbr[4] = {k - 1, k + 1, k - nx, k + nx};
                for (std::size_t kk : nbr) {
                    if (label[kk] != id && !seen[kk]) {
                        seen[kk] = 1;
                        queue.push_back(kk);
                    }
                }
            }
            queue.clear();
            if (enclosed && map.flags[k_hole_max] == PointFlag::ok) {
                const double peak = map.values[k_hole_max].real();
                if (peak > rep.value + kCraterContrast * std::abs(rep.value)) {
                    rep.kind = ExtremumKind::crater;
                    rep.center = {map.xs[k_hole_max % nx], map.ys[k_hole_max / nx]};
                    rep.center_value = peak;
                    rep.crater_radius = std::hypot(rep.position.x - rep.center.x, rep.position.y - rep.center.y);
                }
            }
        }
        rep.quadrant = quadrant_of(rep.center, dx, dy);
        out.push_back(rep);
    }
    return out;
}

IsotropyReport isotropy_profile(const DriveParams& drive, const RateSet& rates, const MediumParams& medium,
                                Point2 center, double radius, std::size_t samples) {
    if (samples < 16) throw std::invalid_argument("isotropy_profile: samples must be >= 16");
    if (!(radius > 0.0)) throw std::invalid_argument("isotropy_profile: radius must be > 0");

    IsotropyReport rep;
    rep.center = center;
    rep.radius = radius;
    rep.samples = samples;
    rep.min = std::numeric_limits<double>::infinity();
    rep.max = -rep.min;
    double sum = 0.0;
    std::size_t good = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        const double theta = 2.0 * constants::pi * static_cast<double>(s) / static_cast<double>(samples);
        const double x = center.x + radius * std::cos(theta);
        const double y = center.y + radius * std::sin(theta);
        try {
            const double v = permeability_at_point(x, y, drive, rates, medium).real();
            sum += v;
            rep.min = std::min(rep.min, v);
            rep.max = std::max(rep.max, v);
            ++good;
        } catch (const SingularityError&) {
            ++rep.singular_samples;
        }
    }
    if (good == 0) {
        rep.mean = rep.min = rep.max = rep.spread = rep.relative_spread = kNaN;
        return rep;
    }
    rep.mean = sum / static_cast<double>(good);
    rep.spread = rep.max - rep.min;
    rep.relative_spread = rep.mean != 0.0 ? rep.spread / std::abs(rep.mean)
                                          : std::numeric_limits<double>::infinity();
    return rep;
}

FieldMap mirror_map_x(const FieldMap& map) {
    const auto& g = map.grid;
    const double tol = 1e-12 * std::max(std::abs(g.x_min), std::abs(g.x_max));
    if (std::abs(g.x_min + g.x_max) > tol || g.nx % 2 == 0) {
        throw AsymmetricGrid("mirror_map_x needs x_min = -x_max and an odd nx");
    }
    FieldMap out = map;
    for (std::size_t j = 0; j < g.ny; ++j) {
        for (std::size_t i = 0; i < g.nx; ++i) {
            const std::size_t src = map.index(g.nx - 1 - i, j);
            out.values[out.index(i, j)] = map.values[src];
            out.flags[out.index(i, j)] = map.flags[src];
        }
    }
    return out;
}

std::vector<SweepRow> sweep_detuning(SweepAxis axis, const std::vector<double>& values, const SweepBase& base,
                                     std::optional<double> threshold, unsigned threads) {
    if (values.empty()) throw std::invalid_argument("sweep_detuning: empty detuning list");
    std::vector<SweepRow> rows;
    rows.reserve(values.size());
    for (double v : values) {
        DriveParams drive = base.drive;
        (axis == SweepAxis::probe ? drive.delta_p : drive.delta_c) = v;
        const FieldMap map = scan_grid(base.grid, drive, base.rates, base.medium, threads);

        SweepRow row;
        row.detuning = v;
        row.singular_points = map.singular_count();
        if (const auto range = real_range(map)) row.min_re_mu = range->first;

        const std::optional<double> thr = threshold ? threshold : adaptive_threshold(map);
        if (thr) {
            row.threshold = *thr;
            const auto extrema = find_extrema(map, *thr);
            row.regions = extrema.size();
            const ExtremumReport* deepest = nullptr;
            for (const auto& e : extrema) {
                row.quadrants.push_back(e.quadrant);
                if (deepest == nullptr || e.value < deepest->value) deepest = &e;
            }
            if (deepest != nullptr) row.kind = deepest->kind;
        } else {
            row.threshold = kNaN;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace negmu
