#include "qtt/scattering.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace qtt {

namespace {

using cplx = std::complex<double>;

// In-place solve of a 4x4 complex system by Gaussian elimination with
// partial pivoting. Throws degenerate_error on a vanishing pivot.
std::array<cplx, 4> solve4(std::array<std::array<cplx, 4>, 4> m, std::array<cplx, 4> rhs) {
    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int row = col + 1; row < 4; ++row)
            if (std::abs(m[row][col]) > std::abs(m[pivot][col])) pivot = row;
        if (std::abs(m[pivot][col]) < 1e-300)
            throw degenerate_error("boundary-condition system is singular");
        std::swap(m[col], m[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        for (int row = col + 1; row < 4; ++row) {
            const cplx f = m[row][col] / m[col][col];
            m[row][col] = 0.0;
            for (int j = col + 1; j < 4; ++j) m[row][j] -= f * m[col][j];
            rhs[row] -= f * rhs[col];
        }
    }
    std::array<cplx, 4> x{};
    for (int row = 3; row >= 0; --row) {
        cplx acc = rhs[row];
        for (int j = row + 1; j < 4; ++j) acc -= m[row][j] * x[j];
        x[row] = acc / m[row][row];
    }
    return x;
}

struct Kinematics {
    double k;
    cplx k2;
    cplx e1;      // exp(i k_II a), |e1| <= 1 for mu >= 0
    cplx e_ika;   // exp(i k a)
};

Kinematics kinematics(const IncidentState& incident, const BarrierConfig& barrier,
                      const UnitSystem& units) {
    const ComplexWavenumber k2 = barrier_wavenumber(incident.energy, barrier, units);
    const cplx i{0.0, 1.0};
    const cplx kk2 = k2.value();
    return {incident.k, kk2, std::exp(i * kk2 * barrier.width),
            std::exp(i * incident.k * barrier.width)};
}

} // namespace

ScatteringSolution solve_boundary_conditions(const IncidentState& incident,
                                             const BarrierConfig& barrier,
                                             const UnitSystem& units) {
    const auto [k, k2, e1, e_ika] = kinematics(incident, barrier, units);
    if (std::abs(k2) == 0.0)
        throw degenerate_error("interior wavenumber vanishes (E = v0 with v1 = 0)");

    const cplx i{0.0, 1.0};
    // Unknowns: u = (b_i, p, q, a_t) with
    //   psi_II = p exp(i k_II x) + q exp(i k_II (a - x)).
    // Rows: psi(0), psi'(0), psi(a), psi'(a). All entries stay bounded.
    std::array<std::array<cplx, 4>, 4> mat{{
        {cplx{1.0}, cplx{-1.0}, -e1, cplx{0.0}},
        {-i * k, -i * k2, i * k2 * e1, cplx{0.0}},
        {cplx{0.0}, e1, cplx{1.0}, -e_ika},
        {cplx{0.0}, i * k2 * e1, -i * k2, -i * k * e_ika},
    }};
    std::array<cplx, 4> rhs{cplx{-1.0}, -i * k, cplx{0.0}, cplx{0.0}};

    const auto u = solve4(mat, rhs);

    ScatteringSolution sol;
    sol.b_i = u[0];
    sol.a_ii = u[1];
    sol.b_ii_scaled = u[2];
    sol.b_ii = u[2] * e1;
    sol.a_t = u[3];
    sol.t_prob = std::norm(sol.a_t);
    sol.r_prob = std::norm(sol.b_i);
    sol.absorption = 1.0 - sol.t_prob - sol.r_prob;
    return sol;
}

std::complex<double> transmission_amplitude_closed_form(const IncidentState& incident,
                                                        const BarrierConfig& barrier,
                                                        const UnitSystem& units) {
    const auto [k, k2, e1, e_ika] = kinematics(incident, barrier, units);
    if (std::abs(k2) == 0.0)
        throw degenerate_error("interior wavenumber vanishes (E = v0 with v1 = 0)");

    const cplx e2 = e1 * e1;
    const cplx den = (k * k + k2 * k2) * (1.0 - e2) + 2.0 * k * k2 * (1.0 + e2);
    const double scale = (k + std::abs(k2)) * (k + std::abs(k2));
    if (std::abs(den) < 1e-300 * std::max(scale, 1.0))
        throw degenerate_error("transmission denominator vanishes");
    return 4.0 * k * k2 * e1 / (den * e_ika);
}

ProbabilityBudget probability_budget(const ScatteringSolution& solution) {
    return {solution.t_prob, solution.r_prob,
            1.0 - solution.t_prob - solution.r_prob};
}

double boundary_residual(const ScatteringSolution& sol, const IncidentState& incident,
                         const BarrierConfig& barrier, const UnitSystem& units) {
    const auto [k, k2, e1, e_ika] = kinematics(incident, barrier, units);
    const cplx i{0.0, 1.0};

    const cplx p = sol.a_ii;
    const cplx q = sol.b_ii_scaled;

    // x = 0
    const cplx psi1_0 = 1.0 + sol.b_i;
    const cplx psi2_0 = p + q * e1;
    const cplx dpsi1_0 = i * k * (1.0 - sol.b_i);
    const cplx dpsi2_0 = i * k2 * (p - q * e1);
    // x = a
    const cplx psi2_a = p * e1 + q;
    const cplx psi3_a = sol.a_t * e_ika;
    const cplx dpsi2_a = i * k2 * (p * e1 - q);
    const cplx dpsi3_a = i * k * psi3_a;

    const double coeff_scale =
        std::max({1.0, std::abs(sol.b_i), std::abs(p), std::abs(q), std::abs(sol.a_t)});
    const double k_scale = std::max(k, std::abs(k2));

    const double r0 = std::abs(psi1_0 - psi2_0);
    const double ra = std::abs(psi2_a - psi3_a);
    const double d0 = std::abs(dpsi1_0 - dpsi2_0) / k_scale;
    const double da = std::abs(dpsi2_a - dpsi3_a) / k_scale;
    return std::max({r0, ra, d0, da}) / coeff_scale;
}

} // namespace qtt
