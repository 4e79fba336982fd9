#include "negmu/oracle_suite.hpp"

#include "negmu/dynamics.hpp"
#include "negmu/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace negmu {

namespace {

double rel(cplx a, cplx b) noexcept {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

} // namespace

RandomDraw draw_parameters(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    // 1 - u maps [0, 1) onto (0, 1]
    auto half_open = [&](double hi) { return hi * (1.0 - unit(rng)); };
    auto between = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

    RandomDraw d;
    d.rates.gamma1 = half_open(5.0);
    d.rates.gamma2 = half_open(5.0);
    d.rates.gamma3 = half_open(5.0);
    d.drive.delta_p = between(-20.0, 20.0);
    d.drive.delta_c = between(-20.0, 20.0);
    d.drive.omega_b = half_open(1.0);
    d.omega_c = between(0.0, 20.0);
    return d;
}

double componentwise_rel_diff(const CoherenceVector& a, const CoherenceVector& b) noexcept {
    return std::max(rel(a.rho31, b.rho31), rel(a.rho21, b.rho21));
}

double normwise_rel_diff(const CoherenceVector& a, const CoherenceVector& ref) noexcept {
    const double num = std::sqrt(std::norm(a.rho31 - ref.rho31) + std::norm(a.rho21 - ref.rho21));
    const double den = std::sqrt(std::norm(ref.rho31) + std::norm(ref.rho21));
    return den > 0.0 ? num / den : num;
}

double OracleSuiteResult::max_deviation() const noexcept {
    return std::max({max_closed_vs_linear, max_settle_vs_linear, max_settle_vs_closed});
}

OracleSuiteResult run_oracle_suite(const OracleSuiteOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(opts.seed);
    OracleSuiteResult res;
    for (std::size_t n = 0; n < opts.draws; ++n) {
        const RandomDraw d = draw_parameters(rng);
        ++res.draws;
        CoherenceVector closed, linear;
        try {
            closed = steady_coherences(d.omega_c, d.drive, d.rates);
            linear = linear_solve_steady(build_system(d.omega_c, d.drive, d.rates));
        } catch (const SingularSystem&) {
            ++res.singular;
            continue;
        }
        res.max_closed_vs_linear = std::max(res.max_closed_vs_linear, componentwise_rel_diff(closed, linear));
        if (!opts.run_settle) continue;
        try {
            const SettleReport rep = settle(build_system(d.omega_c, d.drive, d.rates), opts.settle_tol, opts.max_t);
            res.total_steps += rep.iterations;
            res.max_settle_vs_linear = std::max(res.max_settle_vs_linear, normwise_rel_diff(rep.final_state, linear));
            res.max_settle_vs_closed = std::max(res.max_settle_vs_closed, normwise_rel_diff(rep.final_state, closed));
        } catch (const NotSettled& e) {
            ++res.not_settled;
            res.total_steps += e.report().iterations;
        }
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

} // namespace negmu
