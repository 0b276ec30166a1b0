#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qtt/numerics.hpp"

using namespace qtt;

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

double wrap_to_principal(double angle) {
    double out = std::remainder(angle, two_pi);
    if (out <= -std::numbers::pi) out = std::numbers::pi;
    return out;
}
} // namespace

TEST_CASE("unwrap leaves smooth sequences alone") {
    const std::vector<double> in{0.1, 0.2, 0.3};
    CHECK(unwrap_phases(in) == in);
}

TEST_CASE("unwrap removes a single 2*pi jump") {
    const auto out = unwrap_phases({3.0, -3.0});
    CHECK(out[0] == 3.0);
    CHECK(out[1] == doctest::Approx(3.2831853071795862).epsilon(1e-15));
}

TEST_CASE("unwrap recovers a wrapped linear phase exactly") {
    std::vector<double> truth, wrapped;
    for (int i = 0; i < 200; ++i) {
        const double phi = 0.03 + 2.9 * i; // ~0.92 pi per step, still < pi
        truth.push_back(phi);
        wrapped.push_back(wrap_to_principal(phi));
    }
    const auto out = unwrap_phases(wrapped);
    // The whole reconstruction can only differ by the first sample's turns.
    const double offset = truth[0] - out[0];
    CHECK(std::remainder(offset, two_pi) == doctest::Approx(0.0).epsilon(1e-12));
    for (std::size_t i = 0; i < truth.size(); ++i)
        CHECK(out[i] + offset == doctest::Approx(truth[i]).epsilon(1e-12));
}

TEST_CASE("unwrap is idempotent and shifts by one global turn count") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> step(-3.0, 3.0);
    std::vector<double> truth{0.4};
    for (int i = 0; i < 100; ++i) truth.push_back(truth.back() + step(rng));
    std::vector<double> wrapped;
    for (const double v : truth) wrapped.push_back(wrap_to_principal(v));

    const auto once = unwrap_phases(wrapped);
    CHECK(unwrap_phases(once) == once);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double turns = (once[i] - truth[i]) / two_pi;
        CHECK(turns == doctest::Approx(std::round(turns)).epsilon(1e-9));
        CHECK(once[i] - truth[i] ==
              doctest::Approx(once[0] - truth[0]).epsilon(1e-9)); // one global shift
    }
}

TEST_CASE("unwrap rejects empty input") {
    CHECK_THROWS_AS(unwrap_phases({}), domain_error);
}

TEST_CASE("differentiate is exact on low-degree polynomials") {
    const auto sq = [](double x) { return x * x; };
    const DerivativeResult d1 = differentiate(sq, 2.0, 0.2);
    CHECK(d1.converged);
    CHECK(d1.value == doctest::Approx(4.0).epsilon(1e-10));

    const auto cubic = [](double x) { return 2.0 * x * x * x - x * x + 3.0 * x - 5.0; };
    const DerivativeResult d3 = differentiate(cubic, 1.5, 0.3);
    CHECK(d3.value == doctest::Approx(6.0 * 1.5 * 1.5 - 3.0 + 3.0).epsilon(1e-10));
}

TEST_CASE("differentiate handles sqrt(2E) at E = 0.5") {
    const auto f = [](double e) { return std::sqrt(2.0 * e); };
    const DerivativeResult d = differentiate(f, 0.5, 0.05);
    CHECK(d.converged);
    CHECK(d.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("differentiate unwraps across the stencil") {
    // Principal-value samples of a steep linear phase: without stencil
    // unwrapping the derivative would be polluted by 2*pi/h spikes.
    const double slope = 40.0;
    const auto f = [&](double e) { return wrap_to_principal(slope * e); };
    DerivativeOptions opt;
    opt.unwrap_stencil = true;
    const DerivativeResult d = differentiate(f, 1.0, 0.01, opt);
    CHECK(d.converged);
    CHECK(d.value == doctest::Approx(slope).epsilon(1e-8));
}

TEST_CASE("differentiate reports non-convergence instead of lying") {
    // White-noise-like function: estimates never settle.
    const auto f = [](double e) {
        return std::sin(1e9 * e) * 1e-2;
    };
    const DerivativeResult d = differentiate(f, 1.0, 0.01);
    CHECK_FALSE(d.converged);
    CHECK(d.achieved_tol > 1e-8);
}

TEST_CASE("differentiate validates its inputs") {
    const auto f = [](double e) { return e; };
    CHECK_THROWS_AS(differentiate(f, -1.0, 0.1), domain_error);
    CHECK_THROWS_AS(differentiate(f, 1.0, 0.0), domain_error);
}

TEST_CASE("linear fit on exact affine data") {
    const FitResult fit = linear_fit({{1.0, 2.0}, {2.0, 4.0}, {3.0, 6.0}});
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(fit.intercept == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("linear fit on constant data") {
    const FitResult fit = linear_fit({{0.0, 1.0}, {1.0, 1.0}, {2.0, 1.0}});
    CHECK(fit.slope == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(fit.intercept == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fit.r_squared == 1.0);
}

TEST_CASE("linear fit satisfies the normal equations") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 40; ++i)
        pts.emplace_back(0.5 * i, 3.0 + 0.7 * i + u(rng));
    const FitResult fit = linear_fit(pts);

    double sum_r = 0.0, sum_rx = 0.0, scale = 0.0;
    for (const auto& [x, y] : pts) {
        const double r = y - (fit.intercept + fit.slope * x);
        sum_r += r;
        sum_rx += r * x;
        scale += std::abs(y) + std::abs(x * y);
    }
    CHECK(std::abs(sum_r) <= 1e-12 * scale);
    CHECK(std::abs(sum_rx) <= 1e-12 * scale);
    CHECK(fit.r_squared >= 0.0);
    CHECK(fit.r_squared <= 1.0);
}

TEST_CASE("linear fit input validation") {
    CHECK_THROWS_AS(linear_fit({{1.0, 2.0}, {2.0, 3.0}}), domain_error);
    CHECK_THROWS_AS(linear_fit({{1.0, 2.0}, {1.0, 3.0}, {1.0, 4.0}}), domain_error);
}
