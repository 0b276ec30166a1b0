#pragma once

#include <stdexcept>

namespace qtt {

// Input outside an operation's stated domain (non-positive energy,
// negative absorption, closed form asked for outside its regime, ...).
class domain_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Inputs on which the scattering problem itself is singular, e.g. a
// vanishing interior wavenumber making the boundary-condition system
// non-invertible, or a vanishing denominator in a closed form.
class degenerate_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qtt
