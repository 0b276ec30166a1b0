#include "qtt/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace qtt {

std::vector<double> unwrap_phases(const std::vector<double>& angles) {
    if (angles.empty())
        throw domain_error("unwrap_phases: empty input");

    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::vector<double> out;
    out.reserve(angles.size());
    out.push_back(angles.front());
    for (std::size_t i = 1; i < angles.size(); ++i) {
        const double jump = angles[i] - out.back();
        const double turns = std::round(jump / two_pi);
        out.push_back(angles[i] - turns * two_pi);
    }
    return out;
}

namespace {

// One Richardson-extrapolated central difference at step h.
double richardson_step(const std::function<double(double)>& f, double e0, double h,
                       bool unwrap) {
    std::vector<double> v{f(e0 - h), f(e0 - 0.5 * h), f(e0 + 0.5 * h), f(e0 + h)};
    if (unwrap) v = unwrap_phases(v);
    const double coarse = (v[3] - v[0]) / (2.0 * h);
    const double fine = (v[2] - v[1]) / h;
    return (4.0 * fine - coarse) / 3.0;
}

} // namespace

DerivativeResult differentiate(const std::function<double(double)>& f, double e0,
                               double h0, const DerivativeOptions& options) {
    if (!(e0 > 0.0))
        throw domain_error("differentiate: evaluation point must be positive");
    if (!(h0 > 0.0))
        throw domain_error("differentiate: initial step must be positive");

    const double floor = options.floor_factor * e0;
    double h = std::min(h0, 0.25 * e0); // keep the whole stencil in (0, 2*e0)
    h = std::max(h, floor);

    double prev = richardson_step(f, e0, h, options.unwrap_stencil);
    DerivativeResult best{prev, std::numeric_limits<double>::infinity(), false};
    while (h * 0.5 >= floor) {
        h *= 0.5;
        const double cur = richardson_step(f, e0, h, options.unwrap_stencil);
        const double scale = std::max(std::abs(cur), 1e-300);
        const double tol = std::abs(cur - prev) / scale;
        if (tol <= best.achieved_tol) {
            best.value = cur;
            best.achieved_tol = tol;
        }
        if (tol <= options.target_rel_tol) {
            best.converged = true;
            return best;
        }
        // Growing disagreement past the optimum step: rounding noise
        // has taken over, smaller steps only make it worse.
        if (tol > 4.0 * best.achieved_tol) break;
        prev = cur;
    }
    return best; // floor or noise onset; caller decides what to do with it
}

FitResult linear_fit(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3)
        throw domain_error("linear_fit: need at least 3 points");

    const double n = static_cast<double>(points.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (const auto& [x, y] : points) {
        mean_x += x;
        mean_y += y;
    }
    mean_x /= n;
    mean_y /= n;

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [x, y] : points) {
        const double dx = x - mean_x;
        const double dy = y - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0)
        throw domain_error("linear_fit: abscissae are all equal");

    FitResult fit;
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;
    if (syy == 0.0) {
        fit.r_squared = 1.0; // constant data, fitted exactly
    } else {
        double ss_res = 0.0;
        for (const auto& [x, y] : points) {
            const double r = y - (fit.intercept + fit.slope * x);
            ss_res += r * r;
        }
        fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    }
    return fit;
}

} // namespace qtt
