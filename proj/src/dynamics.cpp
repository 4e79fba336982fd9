#include "negmu/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace negmu {

namespace {

struct State2 {
    cplx r31;
    cplx r21;
};

State2 rhs(const SystemMatrix& s, const State2& r) noexcept {
    return {s.a[0] - (s.m[0][0] * r.r31 + s.m[0][1] * r.r21),
            s.a[1] - (s.m[1][0] * r.r31 + s.m[1][1] * r.r21)};
}

State2 axpy(const State2& r, double h, const State2& k) noexcept {
    return {r.r31 + h * k.r31, r.r21 + h * k.r21};
}

double norm(const State2& r) noexcept {
    return std::sqrt(std::norm(r.r31) + std::norm(r.r21));
}

cplx rhs32(const ExtendedSystem& s, const State2& r, cplx p) noexcept {
    const cplx i{0.0, 1.0};
    return i * std::conj(r.r21) * s.omega_b + i * s.population_diff_23 * s.omega_c - s.decay32 * p;
}

// One classical RK4 step. The rho32 channel reuses the stage points of R, so
// the R part is bit-identical with or without the extension.
void rk4_step(const SystemMatrix& s, State2& r, double h, const ExtendedSystem* ext, cplx* p) noexcept {
    const State2 k1 = rhs(s, r);
    const State2 r2 = axpy(r, 0.5 * h, k1);
    const State2 k2 = rhs(s, r2);
    const State2 r3 = axpy(r, 0.5 * h, k2);
    const State2 k3 = rhs(s, r3);
    const State2 r4 = axpy(r, h, k3);
    const State2 k4 = rhs(s, r4);

    if (ext != nullptr) {
        const cplx l1 = rhs32(*ext, r, *p);
        const cplx l2 = rhs32(*ext, r2, *p + 0.5 * h * l1);
        const cplx l3 = rhs32(*ext, r3, *p + 0.5 * h * l2);
        const cplx l4 = rhs32(*ext, r4, *p + h * l3);
        *p += (h / 6.0) * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
    }

    r.r31 += (h / 6.0) * (k1.r31 + 2.0 * k2.r31 + 2.0 * k3.r31 + k4.r31);
    r.r21 += (h / 6.0) * (k1.r21 + 2.0 * k2.r21 + 2.0 * k3.r21 + k4.r21);
}

void check_step_args(double t_end, double dt, double bound, std::size_t stride) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("evolve: dt must be > 0");
    if (dt > bound * (1.0 + 1e-12)) {
        throw std::invalid_argument("evolve: dt exceeds the stability bound 0.1/||M||");
    }
    if (!(t_end >= dt) || !std::isfinite(t_end)) throw std::invalid_argument("evolve: t_end must be >= dt");
    if (stride == 0) throw std::invalid_argument("evolve: stride must be >= 1");
}

Trajectory integrate(const SystemMatrix& s, const CoherenceVector& r0, double t_end, double dt,
                     std::size_t stride, const ExtendedSystem* ext, cplx p0) {
    // Number of steps; the last one may be shorter so that t lands on t_end.
    const auto n_full = static_cast<std::size_t>(std::floor(t_end / dt * (1.0 + 1e-12)));
    const double rem = t_end - static_cast<double>(n_full) * dt;
    const bool partial = rem > 1e-12 * dt;
    const std::size_t n_steps = n_full + (partial ? 1 : 0);

    Trajectory traj;
    const std::size_t n_rec = n_steps / stride + 2;
    traj.times.reserve(n_rec);
    traj.states.reserve(n_rec);
    if (ext != nullptr) traj.rho32.reserve(n_rec);

    State2 r{r0.rho31, r0.rho21};
    cplx p = p0;
    auto record = [&](double t) {
        traj.times.push_back(t);
        traj.states.push_back({r.r31, r.r21});
        if (ext != nullptr) traj.rho32.push_back(p);
    };
    record(0.0);

    for (std::size_t n = 1; n <= n_steps; ++n) {
        const bool last = n == n_steps;
        const double h = (last && partial) ? rem : dt;
        rk4_step(s, r, h, ext, ext != nullptr ? &p : nullptr);
        const double size = ext != nullptr ? std::hypot(norm(r), std::abs(p)) : norm(r);
        if (!(size <= kUnstableNorm)) {
            throw UnstableStep("state norm exceeded 1e3 at step " + std::to_string(n) +
                               "; reduce dt");
        }
        if (last || n % stride == 0) {
            record(last ? t_end : static_cast<double>(n) * dt);
        }
    }
    return traj;
}

} // namespace

double inf_norm(const SystemMatrix& sys) noexcept {
    const double row0 = std::abs(sys.m[0][0]) + std::abs(sys.m[0][1]);
    const double row1 = std::abs(sys.m[1][0]) + std::abs(sys.m[1][1]);
    return std::max(row0, row1);
}

double max_stable_step(const SystemMatrix& sys) noexcept {
    const double n = inf_norm(sys);
    return n > 0.0 ? 0.1 / n : std::numeric_limits<double>::infinity();
}

double residual_norm(const SystemMatrix& sys, const CoherenceVector& r) noexcept {
    return norm(rhs(sys, {r.rho31, r.rho21}));
}

Trajectory evolve(const SystemMatrix& sys, const CoherenceVector& r0, double t_end, double dt,
                  std::size_t stride) {
    check_step_args(t_end, dt, max_stable_step(sys), stride);
    return integrate(sys, r0, t_end, dt, stride, nullptr, {});
}

SettleReport settle(const SystemMatrix& sys, double tol, double max_t) {
    if (!(tol > 0.0)) throw std::invalid_argument("settle: tol must be > 0");
    const double drive = std::hypot(std::abs(sys.a[0]), std::abs(sys.a[1]));
    if (!(drive > 0.0)) throw std::invalid_argument("settle: drive vector A is zero");

    const double dt = std::min(max_stable_step(sys), max_t);
    const double target = tol * drive;

    SettleReport rep;
    State2 r{};
    double t = 0.0;
    double res = norm(rhs(sys, r));
    while (res >= target && t < max_t) {
        rk4_step(sys, r, dt, nullptr, nullptr);
        ++rep.iterations;
        t = static_cast<double>(rep.iterations) * dt;
        res = norm(rhs(sys, r));
        if (!(norm(r) <= kUnstableNorm)) throw UnstableStep("settle: state norm exceeded 1e3");
    }
    rep.final_state = {r.r31, r.r21};
    rep.residual = res;
    rep.time = t;
    if (res >= target) {
        throw NotSettled("residual " + std::to_string(res) + " above tolerance at t = " +
                             std::to_string(t),
                         rep);
    }
    return rep;
}

ExtendedSystem build_extended_system(double omega_c, const DriveParams& drive, const RateSet& rates) noexcept {
    ExtendedSystem ext;
    ext.core = build_system(omega_c, drive, rates);
    ext.omega_b = drive.omega_b;
    ext.omega_c = omega_c;
    ext.population_diff_23 = 0.0;
    ext.decay32 = {0.5 * (rates.gamma2 + rates.gamma3 + rates.gamma1), drive.delta_c};
    return ext;
}

double max_stable_step(const ExtendedSystem& sys) noexcept {
    const double n = std::max(inf_norm(sys.core), std::abs(sys.decay32) + std::abs(sys.omega_b));
    return n > 0.0 ? 0.1 / n : std::numeric_limits<double>::infinity();
}

Trajectory evolve_with_rho32(const ExtendedSystem& sys, const CoherenceVector& r0, cplx rho32_0,
                             double t_end, double dt, std::size_t stride) {
    check_step_args(t_end, dt, max_stable_step(sys), stride);
    return integrate(sys.core, r0, t_end, dt, stride, &sys, rho32_0);
}

} // namespace negmu
