#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "qtt/errors.hpp"

namespace qtt {

/// Ordinary least-squares line through a set of points.
struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0; // in [0, 1]; 1 for exact affine data
};

/// Removes 2*pi jumps from a sequence of principal-value angles.
/// The first element is returned unchanged; every adjacent difference of
/// the output lies in (-pi, pi]. Assumes the true phase moves by less
/// than pi between samples. Throws domain_error on empty input.
std::vector<double> unwrap_phases(const std::vector<double>& angles);

/// Outcome of an adaptive numerical derivative. `converged` is false
/// when the step floor was reached before two successive estimates
/// agreed; `achieved_tol` is the final relative disagreement either way.
struct DerivativeResult {
    double value = 0.0;
    double achieved_tol = 0.0;
    bool converged = false;
};

struct DerivativeOptions {
    /// Treat f as an angle and unwrap its values across the stencil
    /// before differencing. Required whenever f is a principal-value
    /// phase; a wrap inside the stencil otherwise injects a 2*pi/h spike.
    bool unwrap_stencil = false;
    /// Stop once two successive Richardson estimates agree to this
    /// relative tolerance.
    double target_rel_tol = 1e-8;
    /// Step floor, relative to the evaluation point: h >= floor_factor * e0.
    double floor_factor = 1e-10;
};

/// d f / d E at e0 by central differences with one Richardson
/// extrapolation step (O(h^4) per estimate). The step starts at h0,
/// clamped so the widest stencil stays inside (0, 2*e0), and is halved
/// until two successive estimates agree to the requested tolerance, the
/// floor is hit, or rounding noise starts growing the disagreement
/// (then the best contracted estimate is returned). e0 must be positive.
DerivativeResult differentiate(const std::function<double(double)>& f, double e0,
                               double h0, const DerivativeOptions& options = {});

/// Ordinary least squares over >= 3 points whose abscissae are not all
/// equal ; exact on affine data. Throws domain_error otherwise.
FitResult linear_fit(const std::vector<std::pair<double, double>>& points);

} // namespace qtt
