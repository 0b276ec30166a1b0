#include "qtt/phase_time.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace qtt {

namespace {

constexpr double kXiDispatchThreshold = 1e-8;   // xi*a below this: closed forms indeterminate
constexpr double kCotPoleThreshold = 1e12;      // |cot(xi a)| above this: use tan form
constexpr double kDenominatorGuard = 1e-300;
constexpr double kOverflowOpacity = 350.0;      // cosh(2 mu a) overflows past this mu*a

double normalize_angle(double phi) {
    constexpr double pi = std::numbers::pi;
    const double two_pi = 2.0 * pi;
    double out = std::remainder(phi, two_pi); // in [-pi, pi]
    if (out <= -pi) out = pi;
    return out;
}

double classical_traversal(const IncidentState& incident, const BarrierConfig& barrier,
                           const UnitSystem& units) {
    return barrier.width * units.mass / (units.hbar * incident.k);
}

TunnellingTimeResult assemble_result(double tau, double phi, const IncidentState& incident,
                                     const BarrierConfig& barrier, const UnitSystem& units,
                                     TimeMethod method) {
    TunnellingTimeResult out;
    out.tau = tau;
    out.phi = phi;
    out.classical_time = classical_traversal(incident, barrier, units);
    out.delay = tau - out.classical_time;
    out.tau_asy = asymptotic_time(incident, barrier, units);
    out.v_limit = limiting_speed(incident, barrier, units);
    out.method = method;
    return out;
}

} // namespace

const char* to_string(TimeMethod method) {
    switch (method) {
        case TimeMethod::analytic: return "analytic";
        case TimeMethod::analytic_tanh: return "analytic-tanh";
        case TimeMethod::numeric_fd: return "numeric-fd";
        case TimeMethod::real_barrier_oracle: return "real-barrier-oracle";
    }
    return "unknown";
}

PhaseDecomposition phase_decomposition(const IncidentState& incident,
                                       const BarrierConfig& barrier,
                                       const UnitSystem& units) {
    const ComplexWavenumber k2 = barrier_wavenumber(incident.energy, barrier, units);
    const double k = incident.k;
    const double xi = k2.xi;
    const double mu = k2.mu;
    const double a = barrier.width;
    const double rho_sq = k2.norm_sq();
    if (rho_sq == 0.0)
        throw degenerate_error("interior wavenumber vanishes (E = v0 with v1 = 0)");

    const double hbar_sq = units.hbar * units.hbar;
    const double m = units.mass;

    PhaseDecomposition d;
    d.rho_sq = rho_sq;
    d.big_a = xi * (k * k + rho_sq);
    d.big_b = mu * (rho_sq - k * k);
    d.big_c = 2.0 * k * rho_sq;
    d.x = std::sin(xi * a) * std::cosh(mu * a);
    d.y = std::cos(xi * a) * std::sinh(mu * a);
    d.omega = std::cos(xi * a) * std::cosh(mu * a);
    d.r = -std::sin(xi * a) * std::sinh(mu * a);

    d.xi_prime = m * xi / (hbar_sq * rho_sq);
    d.mu_prime = -m * mu / (hbar_sq * rho_sq);
    const double k_prime = m / (hbar_sq * k);
    const double rho_sq_prime = 2.0 * (xi * d.xi_prime + mu * d.mu_prime);

    d.a_prime = d.xi_prime * (k * k + rho_sq) + xi * (2.0 * k * k_prime + rho_sq_prime);
    d.b_prime = d.mu_prime * (rho_sq - k * k) + mu * (rho_sq_prime - 2.0 * k * k_prime);
    d.c_prime = 2.0 * k_prime * rho_sq + 2.0 * k * rho_sq_prime;
    return d;
}

double phase(const IncidentState& incident, const BarrierConfig& barrier,
             const UnitSystem& units) {
    const ScatteringSolution sol = solve_boundary_conditions(incident, barrier, units);
    double phi = std::arg(sol.a_t);
    if (phi <= -std::numbers::pi) phi = std::numbers::pi;
    return phi;
}

double phase_closed_form(const IncidentState& incident, const BarrierConfig& barrier,
                         const UnitSystem& units) {
    const ComplexWavenumber k2 = barrier_wavenumber(incident.energy, barrier, units);
    const double xi = k2.xi;
    const double mu = k2.mu;
    const double a = barrier.width;
    const double k = incident.k;
    const double ka = k * a;

    double raw; // arctan of (phi + ka), branch unknown
    if (xi * a < kXiDispatchThreshold && barrier.v1 == 0.0 && incident.energy < barrier.v0) {
        // xi = 0 limit: the cot form degenerates to the real-barrier phase.
        const double u = (k * k - mu * mu) / (2.0 * k * mu);
        raw = std::atan(u * std::tanh(mu * a));
    } else {
        const PhaseDecomposition d = phase_decomposition(incident, barrier, units);
        const double th = std::tanh(mu * a);
        const double tn = std::tan(xi * a);
        const double big_a = d.big_a, big_b = d.big_b, big_c = d.big_c;
        if (std::abs(tn) * kCotPoleThreshold > 1.0) {
            const double cot = 1.0 / tn;
            raw = std::atan((th * (big_c - big_b * cot) + big_a) /
                            (cot * (big_c + big_a * th) + big_b));
        } else {
            // cot(xi a) pole: multiply through by tan(xi a).
            raw = std::atan((tn * (big_a + big_c * th) - big_b * th) /
                            (big_c + big_a * th + big_b * tn));
        }
    }

    // Branch reconciliation against the authoritative arg a_t. The arctan
    // value must already agree modulo pi; the integer multiple restores it.
    const double reference = phase(incident, barrier, units);
    const double target = reference + ka;
    const double turns = std::round((target - raw) / std::numbers::pi);
    const double reconciled = raw + turns * std::numbers::pi;
    if (std::abs(reconciled - target) > 1e-9)
        throw degenerate_error("closed-form phase fails modulo-pi agreement with arg a_t");
    return reconciled - ka;
}

TunnellingTimeResult tunnelling_time_analytic(const IncidentState& incident,
                                              const BarrierConfig& barrier,
                                              const UnitSystem& units) {
    const ComplexWavenumber k2 = barrier_wavenumber(incident.energy, barrier, units);
    if (k2.xi * barrier.width < kXiDispatchThreshold) {
        if (barrier.v1 == 0.0 && incident.energy < barrier.v0)
            return real_barrier_time(incident, barrier, units);
        if (barrier.v1 > 0.0 && barrier.v1 < 1e-12 * barrier.v0)
            return tunnelling_time_numeric(incident, barrier, units);
    }
    // Past the overflow point of cosh(2 mu a) the bounded arrangement
    // computes the same ratio.
    if (k2.mu * barrier.width > kOverflowOpacity)
        return tunnelling_time_tanh_form(incident, barrier, units);

    const PhaseDecomposition d = phase_decomposition(incident, barrier, units);
    const double a = barrier.width;
    const double xi = k2.xi, mu = k2.mu;
    const double m = units.mass;
    const double hbar_sq = units.hbar * units.hbar;

    const double s2 = std::sin(2.0 * xi * a);
    const double c2 = std::cos(2.0 * xi * a);
    const double sh2 = std::sinh(2.0 * mu * a);
    const double ch2 = std::cosh(2.0 * mu * a);
    const double sin_sq = std::sin(xi * a) * std::sin(xi * a);
    const double cos_sq = std::cos(xi * a) * std::cos(xi * a);
    const double sinh_sq = std::sinh(mu * a) * std::sinh(mu * a);
    const double mix = sin_sq + sinh_sq;

    const double A = d.big_a, B = d.big_b, C = d.big_c;
    const double Ap = d.a_prime, Bp = d.b_prime, Cp = d.c_prime;
    const double amu = a * m * mu / (hbar_sq * d.rho_sq); // = -a * mu'
    const double axi = a * m * xi / (hbar_sq * d.rho_sq); // = +a * xi'

    const double n = s2 * (-amu * (C * C - B * B - A * A) + (Ap * C - A * Cp)) +
                     c2 * (2.0 * B * C * amu) +
                     sh2 * (axi * (A * A + B * B + C * C) + (B * Cp - Bp * C)) +
                     2.0 * axi * A * C * ch2 +
                     2.0 * (Ap * B - A * Bp) * mix;
    const double den = 2.0 * (A * A + B * B) * mix + 2.0 * A * C * sh2 +
                       2.0 * B * C * s2 + 2.0 * C * C * (cos_sq + sinh_sq);
    if (std::abs(den) < kDenominatorGuard)
        throw degenerate_error("phase-time denominator vanishes");

    const double tau = units.hbar * n / den;
    return assemble_result(tau, phase(incident, barrier, units), incident, barrier, units,
                           TimeMethod::analytic);
}

TunnellingTimeResult tunnelling_time_tanh_form(const IncidentState& incident,
                                               const BarrierConfig& barrier,
                                               const UnitSystem& units) {
    const ComplexWavenumber k2 = barrier_wavenumber(incident.energy, barrier, units);
    if (k2.xi * barrier.width < kXiDispatchThreshold) {
        if (barrier.v1 == 0.0 && incident.energy < barrier.v0)
            return real_barrier_time(incident, barrier, units);
        if (barrier.v1 > 0.0 && barrier.v1 < 1e-12 * barrier.v0)
            return tunnelling_time_numeric(incident, barrier, units);
    }

    const PhaseDecomposition d = phase_decomposition(incident, barrier, units);
    const double a = barrier.width;
    const double xi = k2.xi, mu = k2.mu;

    const double sxa = std::sin(xi * a);
    const double cxa = std::cos(xi * a);
    const double th = std::tanh(mu * a);
    const double ch = std::cosh(mu * a);
    const double inv_ch_sq = 1.0 / (ch * ch); // underflows benignly deep in the opaque regime

    const double A = d.big_a, B = d.big_b, C = d.big_c;
    const double Ap = d.a_prime, Bp = d.b_prime, Cp = d.c_prime;
    const double a_xi_p = a * d.xi_prime;
    const double a_mu_p = a * d.mu_prime;

    const double n =
        inv_ch_sq * (sxa * cxa * (a_mu_p * (C * C - B * B - A * A) + (Ap * C - A * Cp)) +
                     a_mu_p * B * C * (sxa * sxa - cxa * cxa)) +
        th * (a_xi_p * (A * A + B * B + C * C) + (B * Cp - Bp * C)) +
        a_xi_p * A * C * (1.0 + th * th) +
        (Ap * B - A * Bp) * (sxa * sxa + th * th * cxa * cxa);
    const double den = (A * A + B * B) * (sxa * sxa + th * th * cxa * cxa) +
                       2.0 * A * C * th + C * C * (cxa * cxa + sxa * sxa * th * th) +
                       B * C * std::sin(2.0 * xi * a) * inv_ch_sq;
    if (std::abs(den) < kDenominatorGuard)
        throw degenerate_error("phase-time denominator vanishes");

    const double tau = units.hbar * n / den;
    return assemble_result(tau, phase(incident, barrier, units), incident, barrier, units,
                           TimeMethod::analytic_tanh);
}

TunnellingTimeResult tunnelling_time_numeric(const IncidentState& incident,
                                             const BarrierConfig& barrier,
                                             const UnitSystem& units,
                                             DerivativeResult* diagnostics) {
    const double a = barrier.width;
    const auto accumulated_phase = [&](double energy) {
        const IncidentState probe = make_incident(energy, units);
        return phase(probe, barrier, units) + probe.k * a;
    };

    DerivativeOptions options;
    options.unwrap_stencil = true;
    const double h0 = 1e-2 * incident.energy;
    const DerivativeResult der = differentiate(accumulated_phase, incident.energy, h0, options);
    if (diagnostics) *diagnostics = der;

    const double tau = units.hbar * der.value;
    return assemble_result(tau, phase(incident, barrier, units), incident, barrier, units,
                           TimeMethod::numeric_fd);
}

TunnellingTimeResult real_barrier_time(const IncidentState& incident,
                                       const BarrierConfig& barrier,
                                       const UnitSystem& units) {
    if (barrier.v1 != 0.0)
        throw domain_error("real-barrier oracle requires v1 = 0");
    if (!(incident.energy > 0.0) || !(incident.energy < barrier.v0))
        throw domain_error("real-barrier oracle requires 0 < E < v0");

    const double k = incident.k;
    const double a = barrier.width;
    const double m = units.mass;
    const double hbar = units.hbar;
    const double mu = std::sqrt(2.0 * m * (barrier.v0 - incident.energy)) / hbar;

    // Phase above the k*a baseline: arctan(u * tanh(mu a)) with
    // u = (k^2 - mu^2)/(2 k mu); differentiate in closed form.
    const double e = incident.energy;
    const double gap = barrier.v0 - e;
    const double u = (2.0 * e - barrier.v0) / (2.0 * std::sqrt(e * gap));
    const double u_prime = barrier.v0 * barrier.v0 / (4.0 * std::pow(e * gap, 1.5));
    const double mu_prime = -m / (hbar * hbar * mu);

    const double th = std::tanh(mu * a);
    const double sech = 1.0 / std::cosh(mu * a);
    const double g = u * th;
    const double g_prime = u_prime * th + u * a * mu_prime * sech * sech;
    const double tau = hbar * g_prime / (1.0 + g * g);

    const double phi = normalize_angle(std::atan(g) - k * a);
    return assemble_result(tau, phi, incident, barrier, units,
                           TimeMethod::real_barrier_oracle);
}

double asymptotic_time(const IncidentState& incident, const BarrierConfig& barrier,
                       const UnitSystem& units) {
    const ComplexWavenumber k2 = barrier_wavenumber(incident.energy, barrier, units);
    const double rho_sq = k2.norm_sq();
    if (!(rho_sq > 0.0))
        throw domain_error("asymptotic time undefined for a vanishing interior wavenumber");
    return units.mass * k2.xi * barrier.width / (units.hbar * rho_sq);
}

double limiting_speed(const IncidentState& incident, const BarrierConfig& barrier,
                      const UnitSystem& units) {
    const ComplexWavenumber k2 = barrier_wavenumber(incident.energy, barrier, units);
    const double rho_sq = k2.norm_sq();
    if (!(rho_sq > 0.0))
        throw domain_error("limiting speed undefined for a vanishing interior wavenumber");
    if (k2.xi == 0.0) return std::numeric_limits<double>::infinity();
    return units.hbar * rho_sq / (units.mass * k2.xi);
}

} // namespace qtt
