#pragma once

#include <complex>

#include "qtt/errors.hpp"

namespace qtt {

/// Dimensional scheme used by every computation. The default is the
/// dimensionless internal scheme hbar = m = 1; any consistent set of
/// positive values is accepted (the CLI's electron-units mode runs the
/// core with hbar = 1 and the electron mass expressed in eV/nm units).
struct UnitSystem {
    double hbar = 1.0;
    double mass = 1.0;
};

/// Rectangular absorptive barrier V(x) = v0 - i*v1 on (0, width),
/// zero elsewhere. v1 >= 0 is the absorption strength; v1 = 0 recovers
/// the ordinary real barrier.
struct BarrierConfig {
    double v0 = 0.0;
    double v1 = 0.0;
    double width = 1.0;
};

/// Incident plane wave of unit amplitude, exp(i*k*x) with k > 0.
struct IncidentState {
    double energy = 0.0;
    double k = 0.0;
};

/// Interior wavenumber k_II = xi + i*mu on the decaying branch
/// (mu >= 0; xi >= 0 whenever v1 >= 0).
struct ComplexWavenumber {
    double xi = 0.0;
    double mu = 0.0;

    std::complex<double> value() const { return {xi, mu}; }
    double norm_sq() const { return xi * xi + mu * mu; }
};

/// Throws domain_error when hbar or mass is not positive.
void validate(const UnitSystem& units);

/// Throws domain_error when width <= 0 or v1 < 0.
void validate(const BarrierConfig& barrier);

/// k = sqrt(2*m*E)/hbar for the free regions. energy must be positive.
double free_wavenumber(double energy, const UnitSystem& units);

/// Builds the incident state, enforcing energy > 0.
IncidentState make_incident(double energy, const UnitSystem& units);

/// Principal complex square root of 2m(E - v0 + i*v1)/hbar^2, normalised
/// to the decaying branch mu >= 0. Valid for every energy > 0, on either
/// side of the barrier top, and continuous across it whenever v1 > 0.
ComplexWavenumber barrier_wavenumber(double energy, const BarrierConfig& barrier,
                                     const UnitSystem& units);

/// Explicit real/imaginary split of the interior wavenumber for the
/// sub-barrier regime 0 < E < v0:
///   xi = (sqrt(m)/hbar) * sqrt(hypot(E - v0, v1) - (v0 - E))
///   mu = (sqrt(m)/hbar) * sqrt(hypot(E - v0, v1) + (v0 - E))
/// The xi radicand is evaluated in the rationalised form
/// v1^2 / (hypot + (v0 - E)) so small absorptions do not cancel.
/// Throws domain_error for E >= v0; use barrier_wavenumber there.
ComplexWavenumber xi_mu_closed_form(double energy, const BarrierConfig& barrier,
                                    const UnitSystem& units);

} // namespace qtt
