// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Pass --regenerate-golden to rewrite tests/golden/ from the current build.

#include "negmu/config.hpp"
#include "negmu/dynamics.hpp"
#include "negmu/field_map.hpp"
#include "negmu/oracle_suite.hpp"
#include "negmu/output.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace negmu;

namespace {

// Tolerances and limits.
constexpr double kOracleLimit = 1e-7;
constexpr double kOracleSeconds = 10.0;
constexpr std::size_t kOracleDraws = 10000;
constexpr double kSettleTol = 1e-8;
constexpr std::size_t kInvariantDraws = 2000;
constexpr double kExactTol = 1e-12;
constexpr double kMapSeconds = 1.0;
constexpr double kFigureBand = 0.5;
constexpr double kIsoRadius = 0.02;  // wavelengths
constexpr double kIsoFarRadius = 0.1;
constexpr double kIsoLimit = 1e-2;
constexpr double kOrderTarget = 4.0;
constexpr double kOrderBand = 0.2;

const std::string kSource = NEGMU_SOURCE_DIR;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

double rel_diff(cplx a, cplx b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s > 0.0 ? std::abs(a - b) / s : 0.0;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SimulationConfig figure(const std::string& name) {
    return load_config(kSource + "/configs/" + name + ".json");
}

struct Timed {
    FieldMap map;
    double seconds;
};

Timed scan(const SimulationConfig& c) {
    const auto t0 = std::chrono::steady_clock::now();
    FieldMap m = scan_grid(c.grid, c.drive, c.rates, c.medium);
    return {std::move(m), seconds_since(t0)};
}

bool within_band(double got, double target) {
    return std::abs(got - target) <= kFigureBand * std::abs(target);
}

std::set<Quadrant> quadrants_of(const std::vector<ExtremumReport>& reps) {
    std::set<Quadrant> q;
    for (const auto& e : reps) q.insert(e.quadrant);
    return q;
}

// 1
Outcome oracle_equivalence() {
    Outcome o;
    OracleSuiteOptions opts;
    opts.draws = kOracleDraws;
    opts.settle_tol = kSettleTol;
    const auto r = run_oracle_suite(opts);
    o.detail << "draws " << r.draws << ", closed/linear " << r.max_closed_vs_linear << ", settle/linear "
             << r.max_settle_vs_linear << ", settle/closed " << r.max_settle_vs_closed << ", " << r.seconds << " s";
    o.require(r.singular == 0 && r.not_settled == 0, "all draws solved and settled");
    o.require(r.max_deviation() < kOracleLimit, "max deviation < 1e-7");
    o.require(r.seconds < kOracleSeconds, "runtime < 10 s");
    return o;
}

// 2
Outcome exact_invariants() {
    Outcome o;
    std::mt19937_64 rng(OracleSuiteOptions{}.seed + 1);
    const MediumParams m;
    double lin = 0, indep = 0, refl = 0;
    std::size_t passive_violations = 0;
    for (std::size_t n = 0; n < kInvariantDraws; ++n) {
        const auto p = draw_parameters(rng);
        const auto base = steady_coherences(p.omega_c, p.drive, p.rates);
        const cplx chi = magnetic_susceptibility(base.rho31, p.drive, p.rates, m);
        for (double c : {0.01, 0.1, 10.0}) {
            DriveParams d = p.drive;
            d.omega_b *= c;
            const auto s = steady_coherences(p.omega_c, d, p.rates);
            lin = std::max(lin, rel_diff(s.rho31, c * base.rho31));
            indep = std::max(indep, rel_diff(magnetic_susceptibility(s.rho31, d, p.rates, m), chi));
        }
        DriveParams f = p.drive;
        f.delta_p = -f.delta_p;
        f.delta_c = -f.delta_c;
        refl = std::max(refl, rel_diff(steady_coherences(p.omega_c, f, p.rates).rho31, -std::conj(base.rho31)));
        if (!(base.rho31.imag() > 0.0)) ++passive_violations;
    }
    const cplx unit = relative_permeability(cplx{}, m);
    o.detail << kInvariantDraws << " draws, linearity " << lin << ", chi(Omega_B) " << indep << ", reflection "
             << refl << ", Im rho31 <= 0 in " << passive_violations << ", mu_r(0) = " << unit.real() << "+"
             << unit.imag() << "i";
    o.require(lin < kExactTol, "Omega_B linearity");
    o.require(indep < kExactTol, "chi independent of Omega_B");
    o.require(refl < kExactTol, "detuning reflection");
    o.require(passive_violations == 0, "Im rho31 > 0");
    o.require(unit == cplx{1.0, 0.0}, "mu_r(chi=0) = 1");
    return o;
}

double max_rel_diff(const FieldMap& a, const FieldMap& b) {
    double w = 0.0;
    for (std::size_t k = 0; k < a.values.size(); ++k) w = std::max(w, rel_diff(a.values[k], b.values[k]));
    return w;
}

// 3
Outcome map_symmetries() {
    Outcome o;
    SimulationConfig c = figure("fig2a");
    const double l = c.drive.wavelength;
    const Timed base = scan(c);
    double slowest = base.seconds;

    double exchange = 0.0;
    for (std::size_t j = 0; j < c.grid.ny; ++j)
        for (std::size_t i = 0; i < c.grid.nx; ++i)
            exchange = std::max(exchange, rel_diff(base.map.at(i, j), base.map.at(j, i)));

    SimulationConfig sx = c;
    sx.grid.x_min += l;
    sx.grid.x_max += l;
    const Timed shx = scan(sx);
    SimulationConfig sy = c;
    sy.grid.y_min += l;
    sy.grid.y_max += l;
    const Timed shy = scan(sy);
    const double period = std::max(max_rel_diff(base.map, shx.map), max_rel_diff(base.map, shy.map));

    SimulationConfig mc = c;
    mc.drive.phi_x -= constants::pi;
    const Timed shifted = scan(mc);
    const double mirror = max_rel_diff(shifted.map, mirror_map_x(base.map));
    slowest = std::max({slowest, shx.seconds, shy.seconds, shifted.seconds});

    o.detail << c.grid.nx << "x" << c.grid.ny << ", exchange " << exchange << ", period " << period << ", mirror "
             << mirror << ", slowest map " << slowest << " s";
    o.require(exchange <= kExactTol, "x<->y exchange");
    o.require(period <= kExactTol, "lambda periodicity");
    o.require(mirror <= kExactTol, "phi -> phi - pi mirror");
    o.require(slowest < kMapSeconds, "each map < 1 s");
    return o;
}

struct Panel {
    std::string config;
    double target;
    ExtremumKind kind;
};

// 4 and 5
Outcome figure_sequence(const std::vector<Panel>& panels) {
    Outcome o;
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& p : panels) {
        const SimulationConfig c = figure(p.config);
        const FieldMap m = scan(c).map;
        const auto thr = adaptive_threshold(m);
        const auto range = real_range(m);
        if (!thr || !range) {
            o.require(false, p.config + " has a negative extremum");
            continue;
        }
        const auto reps = find_extrema(m, *thr);
        const double mn = range->first;
        o.detail << " " << p.config << ": min " << mn << " (paper " << p.target << "), " << reps.size() << " x";
        for (const auto& e : reps) o.detail << " " << to_string(e.kind) << "@" << to_string(e.quadrant);
        o.detail << ";";
        o.require(reps.size() == 2, p.config + " two regions");
        o.require(quadrants_of(reps) == std::set<Quadrant>{Quadrant::I, Quadrant::III}, p.config + " quadrants I, III");
        for (const auto& e : reps) o.require(e.kind == p.kind, p.config + " kind " + to_string(p.kind));
        o.require(std::abs(mn) < prev, p.config + " |min| decreasing");
        o.require(within_band(mn, p.target), p.config + " min within 50%");
        prev = std::abs(mn);
    }
    return o;
}

// 6
Outcome fig4() {
    Outcome o;
    const SimulationConfig a = figure("fig4a");
    const SimulationConfig b = figure("fig4b");
    const FieldMap ma = scan(a).map;
    const FieldMap mb = scan(b).map;
    const auto qa = quadrants_of(find_extrema(ma, *adaptive_threshold(ma)));
    const auto qb = quadrants_of(find_extrema(mb, *adaptive_threshold(mb)));
    const double mirror = max_rel_diff(mb, mirror_map_x(ma));
    const auto ra = *real_range(ma);
    const auto rb = *real_range(mb);
    o.detail << "phi=0 range [" << ra.first << ", " << ra.second << "], phi=-pi range [" << rb.first << ", "
             << rb.second << "], mirror " << mirror << ", quadrants";
    for (auto q : qa) o.detail << " " << to_string(q);
    o.detail << " /";
    for (auto q : qb) o.detail << " " << to_string(q);
    o.require(qa == std::set<Quadrant>{Quadrant::I, Quadrant::III}, "phi=0 quadrants I, III");
    o.require(qb == std::set<Quadrant>{Quadrant::II, Quadrant::IV}, "phi=-pi quadrants II, IV");
    o.require(mirror <= kExactTol, "x-mirror");
    for (const auto& r : {ra, rb}) {
        o.require(within_band(r.first, -1.0), "lower end within 50% of -1.0");
        o.require(within_band(r.second, -0.4), "upper end within 50% of -0.4");
    }
    return o;
}

// 7
Outcome isotropy() {
    Outcome o;
    const SimulationConfig c = figure("fig2a");
    const FieldMap m = scan(c).map;
    const auto reps = find_extrema(m, *adaptive_threshold(m));
    const double l = c.drive.wavelength;
    o.require(!reps.empty(), "extrema found");
    for (const auto& e : reps) {
        const auto near = isotropy_profile(c.drive, c.rates, c.medium, e.center, kIsoRadius * l, 64);
        const auto far = isotropy_profile(c.drive, c.rates, c.medium, e.center, kIsoFarRadius * l, 64);
        o.detail << " centre (" << e.center.x << ", " << e.center.y << "): rel spread " << near.relative_spread
                 << ", spread ratio " << near.spread / far.spread << ";";
        o.require(near.singular_samples == 0 && far.singular_samples == 0, "no singular samples");
        o.require(near.relative_spread < kIsoLimit, "relative spread < 1e-2");
        o.require(near.spread < far.spread / 10.0, "spread(0.02) < spread(0.1)/10");
    }
    return o;
}

// 8
struct GoldenSet {
    std::string csv, json, ppm;
};

GoldenSet render_golden() {
    SimulationConfig c = figure("fig2a");
    c.grid.nx = c.grid.ny = 11;
    const FieldMap m = scan_grid(c.grid, c.drive, c.rates, c.medium);
    return {write_map_csv(m), write_map_json(m, c), render_heatmap_ppm(m, HeatmapStyle{})};
}

const char* const kGoldenNames[3] = {"fig2a_11x11.csv", "fig2a_11x11.json", "fig2a_11x11.ppm"};

std::string read_bytes(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return {};
    return {std::istreambuf_iterator<char>(f), {}};
}

void regenerate_golden() {
    const GoldenSet g = render_golden();
    const std::string* parts[3] = {&g.csv, &g.json, &g.ppm};
    for (int k = 0; k < 3; ++k) {
        std::ofstream f(kSource + "/tests/golden/" + kGoldenNames[k], std::ios::binary);
        f.write(parts[k]->data(), static_cast<std::streamsize>(parts[k]->size()));
        std::cout << "wrote tests/golden/" << kGoldenNames[k] << "\n";
    }
}

Outcome golden_files() {
    Outcome o;
    const GoldenSet a = render_golden();
    const GoldenSet b = render_golden();
    const std::string* now[3] = {&a.csv, &a.json, &a.ppm};
    const std::string* again[3] = {&b.csv, &b.json, &b.ppm};
    for (int k = 0; k < 3; ++k) {
        const std::string want = read_bytes(kSource + "/tests/golden/" + kGoldenNames[k]);
        o.detail << " " << kGoldenNames[k] << " " << want.size() << " bytes;";
        o.require(!want.empty(), std::string(kGoldenNames[k]) + " present");
        o.require(*now[k] == want, std::string(kGoldenNames[k]) + " byte-exact");
        o.require(*now[k] == *again[k], std::string(kGoldenNames[k]) + " repeatable");
    }
    return o;
}

// 9
Outcome rk4_order() {
    Outcome o;
    const RateSet r;
    DriveParams d;
    d.delta_p = 5.0;
    d.omega_b = 1.0;
    const auto sys = build_system(0.0, d, r);
    const double t_end = 2.0;
    const cplx g{0.5 * (r.gamma1 + r.gamma3), d.delta_p};
    const cplx exact = cplx{0.0, d.omega_b} / g * (1.0 - std::exp(-g * t_end));
    const double steps[3] = {1e-2, 5e-3, 2.5e-3};
    double err[3];
    for (int k = 0; k < 3; ++k) err[k] = std::abs(evolve(sys, {}, t_end, steps[k]).states.back().rho31 - exact);
    const double p1 = std::log2(err[0] / err[1]);
    const double p2 = std::log2(err[1] / err[2]);
    o.detail << "errors " << err[0] << ", " << err[1] << ", " << err[2] << "; orders " << p1 << ", " << p2;
    o.require(std::abs(p1 - kOrderTarget) <= kOrderBand && std::abs(p2 - kOrderTarget) <= kOrderBand,
              "order 4.0 +- 0.2");
    return o;
}

} // namespace

int main(int argc, char** argv) {
    if (argc > 1 && std::strcmp(argv[1], "--regenerate-golden") == 0) {
        regenerate_golden();
        return 0;
    }

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"oracle equivalence", oracle_equivalence},
        {"exact invariants", exact_invariants},
        {"map symmetries", map_symmetries},
        {"probe detuning sequence",
         [] {
             return figure_sequence({{"fig2a", -6.0, ExtremumKind::crater},
                                     {"fig2b", -5.0, ExtremumKind::spike},
                                     {"fig2c", -2.0, ExtremumKind::spike},
                                     {"fig2d", -1.2, ExtremumKind::spike}});
         }},
        {"coupling detuning sequence",
         [] {
             return figure_sequence({{"fig3a", -4.0, ExtremumKind::crater},
                                     {"fig3b", -2.6, ExtremumKind::spike},
                                     {"fig3c", -1.8, ExtremumKind::spike},
                                     {"fig3d", -1.2, ExtremumKind::spike}});
         }},
        {"phase-shifted drive", fig4},
        {"isotropy", isotropy},
        {"output determinism", golden_files},
        {"rk4 order", rk4_order},
    };

    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " exception: " << e.what();
        }
        if (!o.pass) ++failed;
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << (k + 1) << " " << criteria[k].first << ": "
                  << o.detail.str() << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
