#pragma once

// Randomised three-way cross-check of the steady state: closed form, direct
// 2x2 solve, and RK4 settling from R = 0.

#include "negmu/atom_core.hpp"

#include <cstddef>
#include <cstdint>
#include <random>

namespace negmu {

/// One random parameter point: rates in (0, 5], detunings in [-20, 20],
/// Omega_C in [0, 20], Omega_B in (0, 1], all in units of gamma.
struct RandomDraw {
    RateSet rates;
    DriveParams drive;
    double omega_c = 0.0;
};

RandomDraw draw_parameters(std::mt19937_64& rng);

/// max over components of |a - b| / max(|a|, |b|); 0 when both vanish.
double componentwise_rel_diff(const CoherenceVector& a, const CoherenceVector& b) noexcept;

/// ||a - b|| / ||b|| with the Euclidean norm over both components.
double normwise_rel_diff(const CoherenceVector& a, const CoherenceVector& ref) noexcept;

struct OracleSuiteOptions {
    std::size_t draws = 10000;
    std::uint64_t seed = 20140613;
    double settle_tol = 1e-8;
    double max_t = 1e4;
    bool run_settle = true;
};

struct OracleSuiteResult {
    std::size_t draws = 0;
    double max_closed_vs_linear = 0.0;  // componentwise relative
    double max_settle_vs_linear = 0.0;  // normwise relative
    double max_settle_vs_closed = 0.0;  // normwise relative
    std::size_t not_settled = 0;
    std::size_t singular = 0;
    std::size_t total_steps = 0;
    double seconds = 0.0;

    double max_deviation() const noexcept;
};

OracleSuiteResult run_oracle_suite(const OracleSuiteOptions& opts);

} // namespace negmu
