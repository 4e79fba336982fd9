#pragma once

// Time integration of dR/dt = -M R + A with classical fixed-step RK4. This is
// an independent route to the steady state, used to cross-check the closed
// form and the direct linear solve. Time is dimensionless (t * gamma).

#include "negmu/atom_core.hpp"
#include "negmu/errors.hpp"

#include <cstddef>
#include <vector>

namespace negmu {

struct Trajectory {
    std::vector<double> times;
    std::vector<CoherenceVector> states;
    std::vector<cplx> rho32;  // empty unless integrated with the rho32 extension
};

struct SettleReport {
    CoherenceVector final_state;
    std::size_t iterations = 0;
    double residual = 0.0;  // ||-M R + A||
    double time = 0.0;
};

class NotSettled : public Error {
public:
    NotSettled(const std::string& what, SettleReport report) : Error(what), report_(report) {}
    const SettleReport& report() const noexcept { return report_; }

private:
    SettleReport report_;
};

/// Max row sum of |m_ij|.
double inf_norm(const SystemMatrix& sys) noexcept;

/// Largest step accepted by evolve(): 0.1 / ||M||_inf.
double max_stable_step(const SystemMatrix& sys) noexcept;

/// Euclidean norm of -M R + A.
double residual_norm(const SystemMatrix& sys, const CoherenceVector& r) noexcept;

/// Integrate from r0 over [0, t_end]. The trajectory holds the initial state
/// and every `stride`-th step; the final state is always recorded. If t_end is
/// not a multiple of dt the last step is shortened to land on t_end.
/// Throws std::invalid_argument on bad dt/t_end/stride, UnstableStep when a
/// state norm exceeds 1e3.
Trajectory evolve(const SystemMatrix& sys, const CoherenceVector& r0, double t_end, double dt,
                  std::size_t stride = 1);

/// Integrate from R = 0 with dt = max_stable_step(sys) until
/// ||-M R + A|| < tol * ||A||. Throws NotSettled (carrying the report) when
/// max_t is reached first.
SettleReport settle(const SystemMatrix& sys, double tol, double max_t);

/// The 2x2 system plus the rho32 equation under frozen populations:
///   d rho32/dt = i conj(rho21) Omega_B + i (rho22 - rho33) Omega_C - decay32 rho32
/// with decay32 = (gamma2 + gamma3 + gamma1)/2 + i delta_c. rho32 is driven by
/// rho21 but never feeds back.
struct ExtendedSystem {
    SystemMatrix core;
    double omega_b = 0.0;
    double omega_c = 0.0;
    double population_diff_23 = 0.0;  // rho22 - rho33, zero for frozen populations
    cplx decay32{};
};

ExtendedSystem build_extended_system(double omega_c, const DriveParams& drive, const RateSet& rates) noexcept;

/// 0.1 / max(||M||_inf, |decay32| + Omega_B).
double max_stable_step(const ExtendedSystem& sys) noexcept;

Trajectory evolve_with_rho32(const ExtendedSystem& sys, const CoherenceVector& r0, cplx rho32_0,
                             double t_end, double dt, std::size_t stride = 1);

inline constexpr double kUnstableNorm = 1e3;

} // namespace negmu
