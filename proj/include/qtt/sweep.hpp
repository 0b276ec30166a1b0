#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qtt/core_model.hpp"
#include "qtt/phase_time.hpp"

namespace qtt {

enum class SweepAxis { energy, width, v0, v1 };
enum class SweepSpacing { linear, logarithmic };

const char* to_string(SweepAxis axis);
const char* to_string(SweepSpacing spacing);

/// One-dimensional parameter sweep: `axis` runs over [start, stop] with
/// `count` samples, the other three parameters held at the fixed values.
struct SweepSpec {
    SweepAxis axis = SweepAxis::width;
    double start = 0.0;
    double stop = 0.0;
    int count = 0;
    SweepSpacing spacing = SweepSpacing::linear;
    double energy = 0.0;
    double v0 = 0.0;
    double v1 = 0.0;
    double width = 0.0;
    UnitSystem units;
};

struct RecordFlags {
    bool degenerate = false;       // point violates an operation precondition
    bool fd_nonconverged = false;  // numeric derivative hit its step floor
    bool near_resonance = false;   // E > v0, v1 = 0, |sin(xi a)| < 1e-6

    bool any() const { return degenerate || fd_nonconverged || near_resonance; }
    std::string to_string() const; // '|'-joined flag names, empty when clean
};

/// One grid point of a sweep. Fields that cannot be computed on a
/// degenerate point are NaN; the record itself is never dropped.
struct SweepRecord {
    double axis_value = 0.0;
    double energy = 0.0;
    double v0 = 0.0;
    double v1 = 0.0;
    double width = 0.0;
    double k = 0.0;
    double xi = 0.0;
    double mu = 0.0;
    double t_prob = 0.0;
    double r_prob = 0.0;
    double absorption = 0.0;
    double phi_unwrapped = 0.0;
    double tau_analytic = 0.0;
    double tau_numeric = 0.0;
    double tau_asy = 0.0;
    double v_limit = 0.0;
    RecordFlags flags;
};

enum class HartmanRegime { saturating, linear_growth, undetermined };

const char* to_string(HartmanRegime regime);

/// Outcome of the width-saturation analysis: either the phase time
/// saturates with the barrier width (the classic opaque-barrier
/// behaviour, unbounded effective speed) or it grows linearly with the
/// slope m xi / (hbar rho^2) once absorption is switched on.
struct HartmanReport {
    HartmanRegime regime = HartmanRegime::undetermined;
    std::optional<double> saturation_value;  // present iff saturating
    std::optional<double> fitted_slope;      // present iff linear growth
    double predicted_slope = 0.0;            // m xi / (hbar rho^2)
    std::optional<double> slope_rel_error;   // present iff linear growth
    double opacity_min = 0.0;                // mu*a actually used by the fit
    double opacity_max = 0.0;
    std::string note;                        // explanation when undetermined
};

/// Width range for hartman_analysis.
struct WidthRange {
    double start = 0.0;
    double stop = 0.0;
    int count = 40;
};

/// Computes the full record for one parameter point. phi_unwrapped is
/// the principal-value phase; run_sweep rewrites it along the axis.
SweepRecord compute_record(double energy, const BarrierConfig& barrier,
                           const UnitSystem& units);

/// Evaluates every grid point in axis order (degenerate points flagged,
/// never dropped) and unwraps the phase column along the axis. Pure and
/// deterministic: identical specs give identical records.
std::vector<SweepRecord> run_sweep(const SweepSpec& spec);

/// Classifies tau(width) over the opaque tail (mu*a >= 10). Saturation
/// is declared when |tau(a_max) - tau(a_max/2)| / tau(a_max/2) < 1e-3;
/// otherwise the tail is fitted and compared against the predicted
/// slope. Requires mu * stop >= 20; reports `undetermined` with a note
/// when the range never becomes opaque.
HartmanReport hartman_analysis(double energy, double v0, double v1,
                               const WidthRange& widths, const UnitSystem& units);

} // namespace qtt
