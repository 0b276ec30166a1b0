#include "qtt/core_model.hpp"

#include <cmath>

namespace qtt {

void validate(const UnitSystem& units) {
    if (!(units.hbar > 0.0) || !(units.mass > 0.0))
        throw domain_error("unit system requires hbar > 0 and mass > 0");
}

void validate(const BarrierConfig& barrier) {
    if (!(barrier.width > 0.0))
        throw domain_error("barrier width must be positive");
    if (!(barrier.v1 >= 0.0))
        throw domain_error("absorption strength v1 must be non-negative");
}

double free_wavenumber(double energy, const UnitSystem& units) {
    validate(units);
    if (!(energy > 0.0))
        throw domain_error("incident energy must be positive");
    return std::sqrt(2.0 * units.mass * energy) / units.hbar;
}

IncidentState make_incident(double energy, const UnitSystem& units) {
    return {energy, free_wavenumber(energy, units)};
}

ComplexWavenumber barrier_wavenumber(double energy, const BarrierConfig& barrier,
                                     const UnitSystem& units) {
    validate(units);
    validate(barrier);
    if (!(energy > 0.0))
        throw domain_error("incident energy must be positive");

    const double scale = 2.0 * units.mass / (units.hbar * units.hbar);
    const std::complex<double> w{scale * (energy - barrier.v0), scale * barrier.v1};
    std::complex<double> root = std::sqrt(w);
    // Decaying branch: the interior solution exp(i*k_II*x) must not grow.
    if (root.imag() < 0.0) root = -root;
    return {root.real(), root.imag()};
}

ComplexWavenumber xi_mu_closed_form(double energy, const BarrierConfig& barrier,
                                    const UnitSystem& units) {
    validate(units);
    validate(barrier);
    if (!(energy > 0.0))
        throw domain_error("incident energy must be positive");
    if (!(energy < barrier.v0))
        throw domain_error("closed-form split requires E < v0; use barrier_wavenumber");

    const double gap = barrier.v0 - energy; // > 0 here
    const double h = std::hypot(gap, barrier.v1);
    const double pref = std::sqrt(units.mass) / units.hbar;
    // h - gap = v1^2 / (h + gap), which stays accurate for v1 << gap.
    const double xi = pref * (barrier.v1 / std::sqrt(h + gap));
    const double mu = pref * std::sqrt(h + gap);
    return {xi, mu};
}

} // namespace qtt
