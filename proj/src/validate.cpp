#include "qtt/validate.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "qtt/core_model.hpp"
#include "qtt/numerics.hpp"
#include "qtt/phase_time.hpp"
#include "qtt/scattering.hpp"
#include "qtt/sweep.hpp"

namespace qtt {

namespace {

const UnitSystem kNatural{};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// Free-propagation identity: without a barrier the wave passes
// unchanged and the time is purely classical, m*a/(hbar*k).
CheckResult check_free_propagation() {
    CheckResult res{"free-propagation-identity", true, "", 0.0};
    const BarrierConfig barrier{0.0, 0.0, 2.0};
    const IncidentState incident = make_incident(0.5, kNatural);

    const ScatteringSolution sol = solve_boundary_conditions(incident, barrier, kNatural);
    const std::complex<double> closed =
        transmission_amplitude_closed_form(incident, barrier, kNatural);
    const double tau = tunnelling_time_analytic(incident, barrier, kNatural).tau;
    const double tau_expected =
        kNatural.mass * barrier.width / (kNatural.hbar * incident.k);

    const double amp_err = std::max(std::abs(sol.a_t - 1.0), std::abs(closed - 1.0));
    const double refl = std::abs(sol.b_i);
    const double tau_err = std::abs(tau - tau_expected) / tau_expected;
    res.passed = amp_err <= 1e-12 && refl <= 1e-12 && tau_err <= 1e-12;
    res.detail = "|a_t-1| <= " + fmt(amp_err) + ", |b_i| = " + fmt(refl) +
                 ", tau rel err = " + fmt(tau_err);
    return res;
}

// T + R = 1 for every real barrier, above and below the top.
CheckResult check_unitarity() {
    CheckResult res{"unitarity", true, "", 0.0};
    std::mt19937_64 rng(20001);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double v0 = 0.3 + 1.7 * u01(rng);
        const double energy = (0.05 + 2.95 * u01(rng)) * v0;
        const double a = 0.1 + 19.9 * u01(rng);
        const BarrierConfig barrier{v0, 0.0, a};
        const IncidentState incident = make_incident(energy, kNatural);
        const ScatteringSolution sol = solve_boundary_conditions(incident, barrier, kNatural);
        worst = std::max(worst, std::abs(sol.t_prob + sol.r_prob - 1.0));
    }
    res.passed = worst <= 1e-12;
    res.detail = "worst |T+R-1| = " + fmt(worst) + " over 1000 random real barriers";
    return res;
}

// The closed-form amplitude against the boundary-condition solver,
// deep into the opaque regime.
CheckResult check_closed_form_vs_solver() {
    CheckResult res{"closed-form-vs-linear-system", true, "", 0.0};
    std::mt19937_64 rng(20002);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double v0 = 0.5 + 1.5 * u01(rng);
        const double energy = (0.05 + 2.95 * u01(rng)) * v0;
        const double v1 = 2.0 * u01(rng) * v0;
        const double opacity = 0.1 + 29.9 * u01(rng);
        const BarrierConfig probe{v0, v1, 1.0};
        const double mu = barrier_wavenumber(energy, probe, kNatural).mu;
        const IncidentState incident = make_incident(energy, kNatural);
        const double a = mu > 1e-9 ? opacity / mu : opacity / incident.k;
        const BarrierConfig barrier{v0, v1, a};

        const std::complex<double> solver =
            solve_boundary_conditions(incident, barrier, kNatural).a_t;
        const std::complex<double> closed =
            transmission_amplitude_closed_form(incident, barrier, kNatural);
        worst = std::max(worst, std::abs(closed - solver) / std::abs(solver));
    }
    res.passed = worst <= 1e-10;
    res.detail = "worst relative amplitude gap = " + fmt(worst) +
                 " over 1000 random points, mu*a up to 30";
    return res;
}

// Both analytic n/d forms against the Richardson finite difference of
// the unwrapped phase, over a 20 x 20 x 5 grid in (E/V0, mu*a, V1/V0).
CheckResult check_analytic_vs_numeric() {
    CheckResult res{"analytic-vs-numeric-tau", true, "", 0.0};
    const double v0 = 1.0;
    const double v1_ratios[] = {0.0, 0.1, 0.5, 1.0, 2.0};

    int checked = 0, flagged = 0, failures = 0;
    double worst_fd = 0.0, worst_form = 0.0;
    for (int ie = 0; ie < 20; ++ie) {
        const double e_ratio = 0.05 + ie * (2.95 / 19.0);
        for (int io = 0; io < 20; ++io) {
            const double opacity = 0.1 + io * (29.9 / 19.0);
            for (const double v1_ratio : v1_ratios) {
                const double energy = e_ratio * v0;
                const double v1 = v1_ratio * v0;
                const BarrierConfig probe{v0, v1, 1.0};
                const ComplexWavenumber k2 = barrier_wavenumber(energy, probe, kNatural);
                const IncidentState incident = make_incident(energy, kNatural);
                // Transparent barriers (mu = 0) cannot reach an opacity
                // target; reuse the axis as k*a instead.
                const double a =
                    k2.mu > 1e-9 ? opacity / k2.mu : opacity / incident.k;
                const BarrierConfig barrier{v0, v1, a};

                if (k2.norm_sq() == 0.0) {
                    ++flagged;
                    continue;
                }
                if (energy > v0 && v1 == 0.0 &&
                    std::abs(std::sin(k2.xi * a)) < 1e-6) {
                    ++flagged;
                    continue;
                }

                DerivativeResult der;
                const double tau_fd =
                    tunnelling_time_numeric(incident, barrier, kNatural, &der).tau;
                if (!der.converged && der.achieved_tol > 1e-6) {
                    ++flagged;
                    continue;
                }
                const double tau_a = tunnelling_time_analytic(incident, barrier, kNatural).tau;
                const double tau_t = tunnelling_time_tanh_form(incident, barrier, kNatural).tau;

                const double scale = std::max(std::abs(tau_fd), 1e-12);
                const double gap_a = std::abs(tau_a - tau_fd) / scale;
                const double gap_t = std::abs(tau_t - tau_fd) / scale;
                const double gap_form =
                    std::abs(tau_a - tau_t) / std::max(std::abs(tau_a), 1e-12);
                worst_fd = std::max({worst_fd, gap_a, gap_t});
                worst_form = std::max(worst_form, gap_form);
                ++checked;
                if (gap_a > 1e-6 || gap_t > 1e-6 || gap_form > 1e-9) ++failures;
            }
        }
    }
    res.passed = failures == 0 && checked >= 1500;
    res.detail = fmt(checked) + " points checked, " + fmt(flagged) + " flagged, " +
                 fmt(failures) + " failures; worst vs-FD gap = " + fmt(worst_fd) +
                 ", worst two-form gap = " + fmt(worst_form);
    return res;
}

// As absorption is switched off the general time must settle onto the
// independent real-barrier closed form.
CheckResult check_real_barrier_limit() {
    CheckResult res{"real-barrier-limit", true, "", 0.0};
    const IncidentState incident = make_incident(0.5, kNatural);
    const double tau_oracle =
        real_barrier_time(incident, BarrierConfig{1.0, 0.0, 2.0}, kNatural).tau;

    double gaps[3];
    const double v1s[] = {1e-2, 1e-4, 1e-6};
    for (int i = 0; i < 3; ++i) {
        const double tau =
            tunnelling_time_analytic(incident, BarrierConfig{1.0, v1s[i], 2.0}, kNatural).tau;
        gaps[i] = std::abs(tau - tau_oracle) / std::abs(tau_oracle);
    }
    res.passed = gaps[0] > gaps[1] && gaps[1] > gaps[2] && gaps[2] < 1e-4;
    res.detail = "relative gaps " + fmt(gaps[0]) + " -> " + fmt(gaps[1]) + " -> " +
                 fmt(gaps[2]) + " for v1 = 1e-2, 1e-4, 1e-6";
    return res;
}

// Width saturation of the real barrier: tau stops growing once the
// barrier is opaque and settles at 2m/(hbar k mu).
CheckResult check_hartman_saturation() {
    CheckResult res{"hartman-saturation", true, "", 0.0};
    const IncidentState incident = make_incident(0.5, kNatural);
    const double k = incident.k;
    const double mu =
        barrier_wavenumber(0.5, BarrierConfig{1.0, 0.0, 1.0}, kNatural).mu;
    const double saturation_expected = 2.0 * kNatural.mass / (kNatural.hbar * k * mu);

    const double tau_20 =
        tunnelling_time_analytic(incident, BarrierConfig{1.0, 0.0, 20.0}, kNatural).tau;
    const double tau_40 =
        tunnelling_time_analytic(incident, BarrierConfig{1.0, 0.0, 40.0}, kNatural).tau;
    const double doubling_gap = std::abs(tau_40 - tau_20) / std::abs(tau_20);
    const double value_err = std::abs(tau_20 - saturation_expected) / saturation_expected;

    const HartmanReport report =
        hartman_analysis(0.5, 1.0, 0.0, WidthRange{0.5, 40.0, 60}, kNatural);
    const bool classified = report.regime == HartmanRegime::saturating &&
                            report.saturation_value &&
                            std::abs(*report.saturation_value - saturation_expected) /
                                    saturation_expected <
                                1e-3;

    res.passed = doubling_gap < 1e-3 && value_err < 1e-3 && classified;
    res.detail = "doubling gap = " + fmt(doubling_gap) + ", saturation value " +
                 fmt(tau_20) + " vs " + fmt(saturation_expected) + " (rel err " +
                 fmt(value_err) + "), regime = " + to_string(report.regime);
    return res;
}

// With absorption on, tau grows linearly in the width; the slope is the
// inverse limiting speed m*xi/(hbar*rho^2).
CheckResult check_hartman_suppression() {
    CheckResult res{"hartman-suppression-slope", true, "", 0.0};
    const ComplexWavenumber k2 =
        barrier_wavenumber(0.5, BarrierConfig{1.0, 0.5, 1.0}, kNatural);
    const double predicted = kNatural.mass * k2.xi / (kNatural.hbar * k2.norm_sq());

    const HartmanReport report = hartman_analysis(
        0.5, 1.0, 0.5, WidthRange{10.0 / k2.mu, 30.0 / k2.mu, 30}, kNatural);
    const bool classified = report.regime == HartmanRegime::linear_growth &&
                            report.fitted_slope && report.slope_rel_error;
    const double rel = classified ? *report.slope_rel_error : 1.0;
    const double pinned_err = std::abs(predicted - 0.321795);

    res.passed = classified && rel < 0.01 && pinned_err < 1e-5;
    res.detail = "regime = " + std::string(to_string(report.regime)) +
                 ", fitted slope = " + (report.fitted_slope ? fmt(*report.fitted_slope) : "-") +
                 " vs predicted " + fmt(predicted) + " (rel err " + fmt(rel) + ")";
    return res;
}

// Halving a small absorption doubles the limiting speed; it diverges as
// the barrier turns real.
CheckResult check_limiting_speed_divergence() {
    CheckResult res{"limiting-speed-divergence", true, "", 0.0};
    const IncidentState incident = make_incident(0.5, kNatural);
    const double v1s[] = {0.2, 0.1, 0.05, 0.025};
    double speeds[4];
    for (int i = 0; i < 4; ++i)
        speeds[i] = limiting_speed(incident, BarrierConfig{1.0, v1s[i], 1.0}, kNatural);

    const bool monotone =
        speeds[0] < speeds[1] && speeds[1] < speeds[2] && speeds[2] < speeds[3];
    const double ratio = speeds[3] / speeds[2];
    res.passed = monotone && std::abs(ratio - 2.0) <= 0.1;
    res.detail = "v_l = " + fmt(speeds[0]) + ", " + fmt(speeds[1]) + ", " + fmt(speeds[2]) +
                 ", " + fmt(speeds[3]) + "; halving ratio = " + fmt(ratio);
    return res;
}

// xi', mu' and the derivatives of the rationalised coefficients against
// adaptive finite differences.
CheckResult check_derivative_identities() {
    CheckResult res{"derivative-identities", true, "", 0.0};
    std::mt19937_64 rng(20009);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    double worst = 0.0;
    DerivativeOptions opt;
    opt.target_rel_tol = 1e-10;
    for (int i = 0; i < 100; ++i) {
        const double v0 = 0.5 + 1.5 * u01(rng);
        const double energy = (0.05 + 2.95 * u01(rng)) * v0;
        const double v1 = (0.05 + 1.95 * u01(rng)) * v0;
        const double a = 0.2 + 4.8 * u01(rng);
        const BarrierConfig barrier{v0, v1, a};
        const IncidentState incident = make_incident(energy, kNatural);
        const PhaseDecomposition dec = phase_decomposition(incident, barrier, kNatural);

        const auto deriv_of = [&](auto field) {
            return differentiate(
                       [&](double e) {
                           return field(
                               phase_decomposition(make_incident(e, kNatural), barrier, kNatural),
                               barrier_wavenumber(e, barrier, kNatural));
                       },
                       energy, 1e-3 * energy, opt)
                .value;
        };
        const double fd_xi =
            deriv_of([](const PhaseDecomposition&, const ComplexWavenumber& w) { return w.xi; });
        const double fd_mu =
            deriv_of([](const PhaseDecomposition&, const ComplexWavenumber& w) { return w.mu; });
        const double fd_a =
            deriv_of([](const PhaseDecomposition& d, const ComplexWavenumber&) { return d.big_a; });
        const double fd_b =
            deriv_of([](const PhaseDecomposition& d, const ComplexWavenumber&) { return d.big_b; });
        const double fd_c =
            deriv_of([](const PhaseDecomposition& d, const ComplexWavenumber&) { return d.big_c; });

        // Scale floors keep the relative comparison meaningful at the
        // rare points where a derivative itself passes through zero.
        const double wn_scale = std::sqrt(dec.rho_sq) / energy;
        const double coeff_scale =
            (std::abs(dec.big_a) + std::abs(dec.big_b) + std::abs(dec.big_c)) / energy;
        const auto rel = [](double fd, double closed, double floor) {
            return std::abs(fd - closed) / std::max(std::abs(closed), floor);
        };
        worst = std::max({worst, rel(fd_xi, dec.xi_prime, wn_scale * 1e-3),
                          rel(fd_mu, dec.mu_prime, wn_scale * 1e-3),
                          rel(fd_a, dec.a_prime, coeff_scale * 1e-3),
                          rel(fd_b, dec.b_prime, coeff_scale * 1e-3),
                          rel(fd_c, dec.c_prime, coeff_scale * 1e-3)});
    }
    res.passed = worst <= 1e-9;
    res.detail = "worst relative identity gap = " + fmt(worst) + " over 100 random points";
    return res;
}

} // namespace

std::vector<CheckResult> run_validation_suite() {
    using clock = std::chrono::steady_clock;
    std::vector<CheckResult (*)()> checks = {
        check_free_propagation,      check_unitarity,
        check_closed_form_vs_solver, check_analytic_vs_numeric,
        check_real_barrier_limit,    check_hartman_saturation,
        check_hartman_suppression,   check_limiting_speed_divergence,
        check_derivative_identities,
    };
    std::vector<CheckResult> results;
    results.reserve(checks.size());
    for (const auto& check : checks) {
        const auto begin = clock::now();
        CheckResult res = check();
        res.seconds = std::chrono::duration<double>(clock::now() - begin).count();
        results.push_back(std::move(res));
    }
    return results;
}

} // namespace qtt
