#pragma once

#include <string>

#include "qtt/core_model.hpp"

namespace qtt::cli {

// Exit-code discipline: usage problems, physics-domain problems and
// validation failures are distinguishable from scripts.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;
inline constexpr int kExitValidation = 4;

/// hbar^2 / (2 m_e) in eV nm^2 (CODATA-derived), the single constant
/// fixing the electron-units mode.
inline constexpr double kHbarSqOver2MeEvNm2 = 0.0380998;

/// "natural": hbar = m = 1, all quantities dimensionless.
/// "electron": energies in eV, lengths in nm; the core runs with
/// hbar = 1 and the electron mass in eV nm units, so times come out in
/// hbar/eV and speeds in nm eV/hbar. Throws domain_error otherwise.
UnitSystem units_for_mode(const std::string& mode);

} // namespace qtt::cli
