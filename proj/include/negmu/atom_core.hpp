#pragma once

// Steady-state response of a Lambda-type three-level atom probed on the
// magnetic-dipole transition |1> <-> |3> while |2> <-> |3> is driven by a
// spatially modulated coupling field.
//
// Units: all rates, detunings and Rabi frequencies are angular frequencies
// expressed in multiples of gamma (RateSet::gamma_scale, rad/s). Lengths are
// meters, mu31 is A*m^2, density_n is m^-3.
//
// Populations are frozen at rho11 = 1, rho22 = rho33 = 0 (weak probe, all
// atoms in the ground state); only the coherences rho31 and rho21 are solved.

#include <array>
#include <complex>

namespace negmu {

using cplx = std::complex<double>;

namespace constants {
inline constexpr double mu0 = 1.25663706212e-6;    // N/A^2, CODATA 2018
inline constexpr double hbar = 1.054571817e-34;    // J*s, exact (SI 2019)
inline constexpr double pi = 3.14159265358979323846;
} // namespace constants

struct RateSet {
    double gamma1 = 0.5;       // collisional dephasing of |1>
    double gamma2 = 1.0;       // decay of |2>
    double gamma3 = 1.5;       // decay of |3>
    double gamma_scale = 1e7;  // gamma in rad/s

    bool operator==(const RateSet&) const = default;
};

struct DriveParams {
    double delta_p = 0.0;      // probe detuning
    double delta_c = 0.0;      // coupling detuning
    double omega_b = 0.1;      // probe Rabi frequency
    double omega_c0 = 5.0;     // standing-wave Rabi amplitude
    double phi_x = 0.0;        // phase of the x standing wave, rad
    double phi_y = 0.0;        // phase of the y standing wave, rad
    double wavelength = 4e-6;  // m

    bool operator==(const DriveParams&) const = default;
};

struct MediumParams {
    double mu31 = 6.6e-23;     // A*m^2
    double density_n = 5e24;   // m^-3
    double mu0 = constants::mu0;
    double hbar = constants::hbar;

    bool operator==(const MediumParams&) const = default;
};

struct CoherenceVector {
    cplx rho31{};
    cplx rho21{};

    bool operator==(const CoherenceVector&) const = default;
};

/// Matrix form dR/dt = -M R + A of the coherence equations, R = (rho31, rho21).
struct SystemMatrix {
    std::array<std::array<cplx, 2>, 2> m{};
    std::array<cplx, 2> a{};
};

// Parameter checks used by configuration loading. They throw ValidationError
// naming the offending field. The evaluation functions below do not call them.
void validate(const RateSet& rates);
void validate(const DriveParams& drive);
void validate(const MediumParams& medium);

/// |rho31| <= 1 and |rho21| <= 1. A false result is a warning, not an error.
bool is_physical(const CoherenceVector& r) noexcept;

/// xi = gamma2/2 + i(delta_p - delta_c), the rho21 relaxation term.
cplx compute_xi(const DriveParams& drive, const RateSet& rates) noexcept;

/// Rabi amplitude of two crossed standing waves at (x, y). Real, may be negative.
double standing_wave_rabi(double x, double y, const DriveParams& drive) noexcept;

SystemMatrix build_system(double omega_c, const DriveParams& drive, const RateSet& rates) noexcept;

/// Closed-form steady state. Throws SingularSystem when the common
/// denominator is below 1e-12 in magnitude.
CoherenceVector steady_coherences(double omega_c, const DriveParams& drive, const RateSet& rates);

/// Steady state by Cramer's rule on M R = A. Throws SingularSystem when
/// |det M| <= 1e-12.
CoherenceVector linear_solve_steady(const SystemMatrix& sys);

cplx magnetic_susceptibility(cplx rho31, const DriveParams& drive, const RateSet& rates,
                             const MediumParams& medium) noexcept;

/// Clausius-Mossotti ratio (1 + 2N chi/3) / (1 - N chi/3). Throws
/// LocalFieldSingularity when |1 - N chi/3| <= 1e-9.
cplx relative_permeability(cplx chi, const MediumParams& medium);

/// Everything a single-point evaluation produces.
struct PointResult {
    double omega_c = 0.0;
    CoherenceVector coherences;
    cplx chi{};
    cplx n_chi{};
    cplx mu_r{};
};

/// Full evaluation chain at (x, y). Singularities are rethrown with the
/// position attached.
PointResult evaluate_point(double x, double y, const DriveParams& drive, const RateSet& rates,
                           const MediumParams& medium);

cplx permeability_at_point(double x, double y, const DriveParams& drive, const RateSet& rates,
                           const MediumParams& medium);

inline constexpr double kSystemSingularThreshold = 1e-12;
inline constexpr double kLocalFieldThreshold = 1e-9;

} // namespace negmu
