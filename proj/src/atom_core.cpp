#include "negmu/atom_core.hpp"

#include "negmu/errors.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace negmu {

namespace {

void require(bool ok, const char* key, const char* reason) {
    if (!ok) throw ValidationError(key, reason);
}

bool finite(double v) { return std::isfinite(v); }

// Common denominator of the closed form: |Omega_C|^2 + xi ((gamma3+gamma1)/2 + i delta_p).
cplx steady_denominator(double omega_c, const DriveParams& drive, const RateSet& rates) {
    const cplx xi = compute_xi(drive, rates);
    const cplx g31{0.5 * (rates.gamma3 + rates.gamma1), drive.delta_p};
    return omega_c * omega_c + xi * g31;
}

std::string at_position(const std::string& what, double x, double y) {
    std::ostringstream os;
    os << what << " at (x=" << x << ", y=" << y << ")";
    return os.str();
}

} // namespace

void validate(const RateSet& rates) {
    require(finite(rates.gamma1) && rates.gamma1 >= 0.0, "rates.gamma1", "must be >= 0");
    require(finite(rates.gamma2) && rates.gamma2 > 0.0, "rates.gamma2", "must be > 0");
    require(finite(rates.gamma3) && rates.gamma3 > 0.0, "rates.gamma3", "must be > 0");
    require(finite(rates.gamma_scale) && rates.gamma_scale > 0.0, "rates.gamma_scale", "must be > 0");
}

void validate(const DriveParams& drive) {
    require(finite(drive.delta_p), "drive.delta_p", "must be finite");
    require(finite(drive.delta_c), "drive.delta_c", "must be finite");
    require(finite(drive.omega_b) && drive.omega_b > 0.0, "drive.omega_b", "must be > 0");
    require(finite(drive.omega_c0) && drive.omega_c0 >= 0.0, "drive.omega_c0", "must be >= 0");
    require(finite(drive.phi_x), "drive.phi_x", "must be finite");
    require(finite(drive.phi_y), "drive.phi_y", "must be finite");
    require(finite(drive.wavelength) && drive.wavelength > 0.0, "drive.wavelength", "must be > 0");
}

void validate(const MediumParams& medium) {
    require(finite(medium.mu31) && medium.mu31 > 0.0, "medium.mu31", "must be > 0");
    require(finite(medium.density_n) && medium.density_n > 0.0, "medium.density_n", "must be > 0");
    require(medium.mu0 == constants::mu0, "medium.mu0", "is fixed at the CODATA value");
    require(medium.hbar == constants::hbar, "medium.hbar", "is fixed at the CODATA value");
}

bool is_physical(const CoherenceVector& r) noexcept {
    return std::abs(r.rho31) <= 1.0 && std::abs(r.rho21) <= 1.0;
}

cplx compute_xi(const DriveParams& drive, const RateSet& rates) noexcept {
    return {0.5 * rates.gamma2, drive.delta_p - drive.delta_c};
}

double standing_wave_rabi(double x, double y, const DriveParams& drive) noexcept {
    const double k = 2.0 * constants::pi / drive.wavelength;
    return drive.omega_c0 * (std::sin(k * x + drive.phi_x) + std::sin(k * y + drive.phi_y));
}

SystemMatrix build_system(double omega_c, const DriveParams& drive, const RateSet& rates) noexcept {
    const cplx i{0.0, 1.0};
    const cplx oc{omega_c, 0.0};
    SystemMatrix s;
    s.m[0][0] = cplx{0.5 * (rates.gamma1 + rates.gamma3), drive.delta_p};
    s.m[0][1] = -i * oc;
    s.m[1][0] = -i * std::conj(oc);
    s.m[1][1] = compute_xi(drive, rates);
    s.a = {cplx{0.0, drive.omega_b}, cplx{}};
    return s;
}

CoherenceVector steady_coherences(double omega_c, const DriveParams& drive, const RateSet& rates) {
    const cplx den = steady_denominator(omega_c, drive, rates);
    if (!(std::abs(den) > kSystemSingularThreshold)) {
        throw SingularSystem("steady-state denominator vanishes");
    }
    const cplx xi = compute_xi(drive, rates);
    const cplx ib{0.0, drive.omega_b};
    return {ib * xi / den, -drive.omega_b * omega_c / den};
}

CoherenceVector linear_solve_steady(const SystemMatrix& sys) {
    const auto& m = sys.m;
    const cplx det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if (!(std::abs(det) > kSystemSingularThreshold)) {
        throw SingularSystem("system matrix determinant vanishes");
    }
    return {(sys.a[0] * m[1][1] - m[0][1] * sys.a[1]) / det,
            (m[0][0] * sys.a[1] - m[1][0] * sys.a[0]) / det};
}

// chi = 2 mu0 mu31 rho31 / B with the probe Rabi frequency Omega_B = B mu31 / (2 hbar).
// Eliminating B = 2 hbar Omega_B / mu31 gives chi = mu0 mu31^2 rho31 / (hbar Omega_B),
// where Omega_B must be in rad/s. Since rho31 is linear in Omega_B the result does
// not depend on the probe strength.
cplx magnetic_susceptibility(cplx rho31, const DriveParams& drive, const RateSet& rates,
                             const MediumParams& medium) noexcept {
    const double omega_b_abs = drive.omega_b * rates.gamma_scale;
    return medium.mu0 * medium.mu31 * medium.mu31 * rho31 / (medium.hbar * omega_b_abs);
}

cplx relative_permeability(cplx chi, const MediumParams& medium) {
    const cplx n_chi = medium.density_n * chi;
    const cplx den = 1.0 - n_chi / 3.0;
    if (!(std::abs(den) > kLocalFieldThreshold)) {
        throw LocalFieldSingularity("local-field denominator 1 - N*chi/3 vanishes");
    }
    return (1.0 + 2.0 * n_chi / 3.0) / den;
}

PointResult evaluate_point(double x, double y, const DriveParams& drive, const RateSet& rates,
                           const MediumParams& medium) {
    PointResult out;
    out.omega_c = standing_wave_rabi(x, y, drive);
    try {
        out.coherences = steady_coherences(out.omega_c, drive, rates);
        out.chi = magnetic_susceptibility(out.coherences.rho31, drive, rates, medium);
        out.n_chi = medium.density_n * out.chi;
        out.mu_r = relative_permeability(out.chi, medium);
    } catch (const SingularSystem& e) {
        throw SingularSystem(at_position(e.what(), x, y), std::pair{x, y});
    } catch (const LocalFieldSingularity& e) {
        throw LocalFieldSingularity(at_position(e.what(), x, y), std::pair{x, y});
    }
    return out;
}

cplx permeability_at_point(double x, double y, const DriveParams& drive, const RateSet& rates,
                           const MediumParams& medium) {
    return evaluate_point(x, y, drive, rates, medium).mu_r;
}

} // namespace negmu
