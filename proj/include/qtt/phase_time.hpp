#pragma once

#include "qtt/core_model.hpp"
#include "qtt/numerics.hpp"
#include "qtt/scattering.hpp"

namespace qtt {

/// Auxiliary quantities of the rationalised inverse transmission
/// amplitude and their energy derivatives. With rho^2 = xi^2 + mu^2:
///   big_a = xi  * (k^2 + rho^2)
///   big_b = mu  * (rho^2 - k^2)
///   big_c = 2 k * rho^2
/// and x, y, omega, r are the mixed trig/hyperbolic products of xi*a
/// and mu*a entering Re/Im of 1/a_t. The primes are d/dE; xi' and mu'
/// follow from differentiating (xi + i mu)^2 = 2m(E - v0 + i v1)/hbar^2:
///   xi' = m xi / (hbar^2 rho^2),   mu' = -m mu / (hbar^2 rho^2).
struct PhaseDecomposition {
    double big_a = 0.0;
    double big_b = 0.0;
    double big_c = 0.0;
    double x = 0.0;     // sin(xi a) cosh(mu a)
    double y = 0.0;     // cos(xi a) sinh(mu a)
    double omega = 0.0; // cos(xi a) cosh(mu a)
    double r = 0.0;     // -sin(xi a) sinh(mu a)
    double rho_sq = 0.0;
    double xi_prime = 0.0;
    double mu_prime = 0.0;
    double a_prime = 0.0;
    double b_prime = 0.0;
    double c_prime = 0.0;
};

/// How a TunnellingTimeResult was obtained.
enum class TimeMethod {
    analytic,            // closed n/d ratio, double-angle form
    analytic_tanh,       // algebraically equal tanh-normalised variant
    numeric_fd,          // Richardson finite difference of the phase
    real_barrier_oracle, // independent v1 = 0 closed form
};

const char* to_string(TimeMethod method);

/// Phase time at one parameter point. tau = classical_time + delay by
/// construction; tau_asy = m xi a / (hbar rho^2) and v_limit = a/tau_asy
/// are the opaque-barrier asymptotics (v_limit is +infinity when xi = 0,
/// the width-saturating regime).
struct TunnellingTimeResult {
    double phi = 0.0;
    double delay = 0.0;
    double classical_time = 0.0;
    double tau = 0.0;
    double tau_asy = 0.0;
    double v_limit = 0.0;
    TimeMethod method = TimeMethod::analytic;
};

PhaseDecomposition phase_decomposition(const IncidentState& incident,
                                       const BarrierConfig& barrier,
                                       const UnitSystem& units);

/// arg a_t of the boundary-condition solution, in (-pi, pi]. This is the
/// authoritative phase; arctan-based forms below are cross-checks only.
double phase(const IncidentState& incident, const BarrierConfig& barrier,
             const UnitSystem& units);

/// Evaluates the arctan closed form of the phase and reconciles its
/// branch against phase(). The two must agree modulo pi to 1e-9 before
/// reconciliation; afterwards the returned value equals phase() up to
/// the same tolerance. Near the poles of cot(xi*a) the algebraically
/// equivalent tan rearrangement is used, and for a vanishing xi with
/// v1 = 0 the real-barrier limit form applies.
double phase_closed_form(const IncidentState& incident, const BarrierConfig& barrier,
                         const UnitSystem& units);

/// Analytic tunnelling time tau = hbar * n / d (double-angle form of
/// the exact energy derivative of arg a_t + k a). Dispatches to the
/// real-barrier oracle when v1 = 0 below the barrier top and to the
/// finite-difference route for absorptions below 1e-12 * v0, where the
/// xi-dependent terms lose all significance.
TunnellingTimeResult tunnelling_time_analytic(const IncidentState& incident,
                                              const BarrierConfig& barrier,
                                              const UnitSystem& units);

/// Same quantity through the tanh-normalised n/d variant (every term
/// bounded, the cosh^2 prefactor absorbed). Equal to the double-angle
/// form to 1e-9 relative wherever both are finite; kept as a second
/// algebraic route.
TunnellingTimeResult tunnelling_time_tanh_form(const IncidentState& incident,
                                               const BarrierConfig& barrier,
                                               const UnitSystem& units);

/// Finite-difference phase time: hbar * d/dE [unwrapped arg a_t + k a]
/// by adaptive Richardson central differences. The independent oracle
/// for both analytic forms.
TunnellingTimeResult tunnelling_time_numeric(const IncidentState& incident,
                                             const BarrierConfig& barrier,
                                             const UnitSystem& units,
                                             DerivativeResult* diagnostics = nullptr);

/// Independent closed form for the real barrier (v1 = 0, 0 < E < v0):
/// with u = (k^2 - mu^2)/(2 k mu), the phase above the free-propagation
/// baseline is arctan(u tanh(mu a)) and
///   tau = hbar * [u' tanh(mu a) + u a mu' sech^2(mu a)] / (1 + u^2 tanh^2(mu a)).
/// Saturates at 2m/(hbar k mu) for opaque widths. Throws domain_error
/// outside its regime.
TunnellingTimeResult real_barrier_time(const IncidentState& incident,
                                       const BarrierConfig& barrier,
                                       const UnitSystem& units);

/// tau_asy = m xi a / (hbar (xi^2 + mu^2)), the width-proportional part
/// of the opaque-limit tunnelling time.
double asymptotic_time(const IncidentState& incident, const BarrierConfig& barrier,
                       const UnitSystem& units);

/// v_l = hbar (xi^2 + mu^2) / (m xi); +infinity when xi = 0 (the
/// unbounded-speed regime of the width-saturating barrier).
double limiting_speed(const IncidentState& incident, const BarrierConfig& barrier,
                      const UnitSystem& units);

} // namespace qtt
