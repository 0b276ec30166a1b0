#include "qtt/sweep.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "qtt/numerics.hpp"
#include "qtt/scattering.hpp"

namespace qtt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kNearResonanceSin = 1e-6;
constexpr double kSaturationTolerance = 1e-3;
constexpr double kOpaqueTailThreshold = 10.0;
constexpr double kOpacityPrecondition = 20.0;
constexpr double kFdAcceptTolerance = 1e-6;

std::vector<double> grid_values(double start, double stop, int count, SweepSpacing spacing) {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(count));
    if (spacing == SweepSpacing::linear) {
        const double step = (stop - start) / (count - 1);
        for (int i = 0; i < count; ++i)
            values.push_back(i + 1 == count ? stop : start + i * step);
    } else {
        const double log_start = std::log(start);
        const double step = (std::log(stop) - log_start) / (count - 1);
        for (int i = 0; i < count; ++i)
            values.push_back(i + 1 == count ? stop : std::exp(log_start + i * step));
    }
    return values;
}

void validate(const SweepSpec& spec) {
    if (!(spec.start < spec.stop))
        throw domain_error("sweep requires start < stop");
    if (spec.count < 2)
        throw domain_error("sweep requires count >= 2");
    if (spec.spacing == SweepSpacing::logarithmic && !(spec.start > 0.0))
        throw domain_error("logarithmic spacing requires start > 0");
    validate(spec.units);
}

} // namespace

const char* to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::energy: return "energy";
        case SweepAxis::width: return "width";
        case SweepAxis::v0: return "v0";
        case SweepAxis::v1: return "v1";
    }
    return "unknown";
}

const char* to_string(SweepSpacing spacing) {
    return spacing == SweepSpacing::linear ? "linear" : "logarithmic";
}

const char* to_string(HartmanRegime regime) {
    switch (regime) {
        case HartmanRegime::saturating: return "saturating";
        case HartmanRegime::linear_growth: return "linear-growth";
        case HartmanRegime::undetermined: return "undetermined";
    }
    return "unknown";
}

std::string RecordFlags::to_string() const {
    std::string out;
    const auto append = [&out](const char* name) {
        if (!out.empty()) out += '|';
        out += name;
    };
    if (degenerate) append("degenerate");
    if (fd_nonconverged) append("fd-nonconverged");
    if (near_resonance) append("near-resonance");
    return out;
}

SweepRecord compute_record(double energy, const BarrierConfig& barrier,
                           const UnitSystem& units) {
    SweepRecord rec;
    rec.energy = energy;
    rec.v0 = barrier.v0;
    rec.v1 = barrier.v1;
    rec.width = barrier.width;
    rec.k = rec.xi = rec.mu = kNaN;
    rec.t_prob = rec.r_prob = rec.absorption = kNaN;
    rec.phi_unwrapped = rec.tau_analytic = rec.tau_numeric = kNaN;
    rec.tau_asy = rec.v_limit = kNaN;

    IncidentState incident;
    try {
        validate(barrier);
        incident = make_incident(energy, units);
        rec.k = incident.k;
        const ComplexWavenumber k2 = barrier_wavenumber(energy, barrier, units);
        rec.xi = k2.xi;
        rec.mu = k2.mu;
        if (k2.norm_sq() == 0.0) {
            rec.flags.degenerate = true;
            return rec;
        }
        if (energy > barrier.v0 && barrier.v1 == 0.0 &&
            std::abs(std::sin(k2.xi * barrier.width)) < kNearResonanceSin)
            rec.flags.near_resonance = true;
    } catch (const domain_error&) {
        rec.flags.degenerate = true;
        return rec;
    }

    try {
        const ScatteringSolution sol = solve_boundary_conditions(incident, barrier, units);
        rec.t_prob = sol.t_prob;
        rec.r_prob = sol.r_prob;
        rec.absorption = sol.absorption;
        rec.phi_unwrapped = phase(incident, barrier, units); // principal; rewrapped per sweep
        rec.tau_analytic = tunnelling_time_analytic(incident, barrier, units).tau;
        rec.tau_asy = asymptotic_time(incident, barrier, units);
        rec.v_limit = limiting_speed(incident, barrier, units);

        DerivativeResult der;
        rec.tau_numeric = tunnelling_time_numeric(incident, barrier, units, &der).tau;
        if (!der.converged && der.achieved_tol > kFdAcceptTolerance)
            rec.flags.fd_nonconverged = true;
    } catch (const degenerate_error&) {
        rec.flags.degenerate = true;
    } catch (const domain_error&) {
        rec.flags.degenerate = true;
    }
    return rec;
}

std::vector<SweepRecord> run_sweep(const SweepSpec& spec) {
    validate(spec);
    const std::vector<double> axis = grid_values(spec.start, spec.stop, spec.count, spec.spacing);

    std::vector<SweepRecord> records;
    records.reserve(axis.size());
    for (const double value : axis) {
        double energy = spec.energy;
        BarrierConfig barrier{spec.v0, spec.v1, spec.width};
        switch (spec.axis) {
            case SweepAxis::energy: energy = value; break;
            case SweepAxis::width: barrier.width = value; break;
            case SweepAxis::v0: barrier.v0 = value; break;
            case SweepAxis::v1: barrier.v1 = value; break;
        }
        SweepRecord rec = compute_record(energy, barrier, spec.units);
        rec.axis_value = value;
        records.push_back(rec);
    }

    // Unwrap the phase column along the axis; NaN entries (degenerate
    // points) pass through without touching the running reference.
    constexpr double two_pi = 2.0 * std::numbers::pi;
    bool have_prev = false;
    double prev = 0.0;
    for (SweepRecord& rec : records) {
        if (std::isnan(rec.phi_unwrapped)) continue;
        if (have_prev) {
            const double turns = std::round((rec.phi_unwrapped - prev) / two_pi);
            rec.phi_unwrapped -= turns * two_pi;
        }
        prev = rec.phi_unwrapped;
        have_prev = true;
    }
    return records;
}

HartmanReport hartman_analysis(double energy, double v0, double v1,
                               const WidthRange& widths, const UnitSystem& units) {
    if (!(widths.start > 0.0) || !(widths.start < widths.stop) || widths.count < 4)
        throw domain_error("hartman_analysis requires 0 < start < stop and count >= 4");

    HartmanReport report;
    const BarrierConfig probe{v0, v1, widths.stop};
    const ComplexWavenumber k2 = barrier_wavenumber(energy, probe, units);
    const double mu = k2.mu;
    const double rho_sq = k2.norm_sq();
    report.predicted_slope =
        rho_sq > 0.0 ? units.mass * k2.xi / (units.hbar * rho_sq) : 0.0;

    if (!(mu * widths.stop >= kOpacityPrecondition)) {
        report.note = "width range never reaches opacity mu*a >= 20";
        return report;
    }

    const IncidentState incident = make_incident(energy, units);
    const auto tau_at = [&](double width) {
        return tunnelling_time_analytic(incident, BarrierConfig{v0, v1, width}, units).tau;
    };

    // Opaque-tail samples (mu*a >= 10) for the slope fit.
    std::vector<std::pair<double, double>> tail;
    const std::vector<double> grid =
        grid_values(widths.start, widths.stop, widths.count, SweepSpacing::linear);
    for (const double a : grid)
        if (mu * a >= kOpaqueTailThreshold) tail.emplace_back(a, tau_at(a));
    if (tail.size() < 3) {
        report.note = "fewer than 3 samples in the opaque tail mu*a >= 10";
        return report;
    }
    report.opacity_min = mu * tail.front().first;
    report.opacity_max = mu * tail.back().first;

    // Saturation criterion: the time stops changing under width doubling.
    const double a_max = widths.stop;
    const double tau_full = tau_at(a_max);
    const double tau_half = tau_at(0.5 * a_max);
    const double saturation_gap = std::abs(tau_full - tau_half) / std::abs(tau_half);

    if (saturation_gap < kSaturationTolerance) {
        report.regime = HartmanRegime::saturating;
        report.saturation_value = tau_full;
        return report;
    }

    const FitResult fit = linear_fit(tail);
    report.regime = HartmanRegime::linear_growth;
    report.fitted_slope = fit.slope;
    if (report.predicted_slope != 0.0)
        report.slope_rel_error =
            std::abs(fit.slope - report.predicted_slope) / report.predicted_slope;
    return report;
}

} // namespace qtt
