#pragma once

#include <complex>

#include "qtt/core_model.hpp"

namespace qtt {

/// Full stationary solution of the three-region scattering problem with
/// unit incident amplitude:
///   psi_I   = exp(ikx) + b_i exp(-ikx)           x < 0
///   psi_II  = a_ii exp(i k_II x) + b_ii exp(-i k_II x)   0 < x < width
///   psi_III = a_t exp(ikx)                       x > width
/// b_ii decays like exp(-2*mu*a) for opaque barriers; the solver also
/// keeps b_ii_scaled = b_ii * exp(-i k_II a), the coefficient of the
/// exp(+i k_II (a - x)) basis function, which stays O(1) and is the safe
/// representation for reconstructing psi_II near x = a.
struct ScatteringSolution {
    std::complex<double> a_t;
    std::complex<double> b_i;
    std::complex<double> a_ii;
    std::complex<double> b_ii;
    std::complex<double> b_ii_scaled;
    double t_prob = 0.0;     // |a_t|^2
    double r_prob = 0.0;     // |b_i|^2
    double absorption = 0.0; // 1 - T - R, nonzero only for v1 > 0
};

/// Channel probabilities of a solution.
struct ProbabilityBudget {
    double transmission = 0.0;
    double reflection = 0.0;
    double absorption = 0.0;
};

/// Solves the four continuity conditions psi and psi' at x = 0 and
/// x = width as a linear system (complex Gaussian elimination with
/// partial pivoting). The interior unknowns are the scaled coefficients
/// of exp(i k_II x) and exp(i k_II (a - x)), so no matrix entry ever
/// grows like exp(+mu*a) and the system stays well conditioned far into
/// the opaque regime. This is the authoritative source of a_t for all
/// phase computations. Throws degenerate_error when k_II = 0.
ScatteringSolution solve_boundary_conditions(const IncidentState& incident,
                                             const BarrierConfig& barrier,
                                             const UnitSystem& units);

/// Closed-form transmission amplitude
///   a_t = 4 k k_II e^{i k_II a} e^{-i k a} /
///         [ (k^2 + k_II^2)(1 - e^{2 i k_II a}) + 2 k k_II (1 + e^{2 i k_II a}) ]
/// Every exponential decays for mu >= 0. Must agree with the linear
/// system to 1e-10 relative; kept as an independent cross-check route.
/// Throws degenerate_error when k_II = 0 or the denominator vanishes.
std::complex<double> transmission_amplitude_closed_form(const IncidentState& incident,
                                                        const BarrierConfig& barrier,
                                                        const UnitSystem& units);

/// (|a_t|^2, |b_i|^2, 1 - T - R).
ProbabilityBudget probability_budget(const ScatteringSolution& solution);

/// Largest mismatch of the four continuity conditions when the solved
/// coefficients are substituted back, relative to the largest
/// coefficient magnitude (derivative rows are scaled by max(k, |k_II|)).
double boundary_residual(const ScatteringSolution& solution, const IncidentState& incident,
                         const BarrierConfig& barrier, const UnitSystem& units);

} // namespace qtt
