#pragma once

#include <vector>

#include "paraflow/field.hpp"

namespace paraflow::fitting {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

/// Fit log(y) against log(x); entries with y <= 0 are dropped.
LineFit log_log(const std::vector<double>& x, const std::vector<double>& y);

/// Mean |coefficient| over integer-radius shells [r, r+1), up to the band.
/// shell 0 holds |m| in [0,1) etc.  Empty shells report 0.
std::vector<double> radial_coef_profile(const ScalarField& f);

/// Log-log slope of the radial |coefficient| profile over shells
/// [r_lo, r_hi].
LineFit radial_decay_fit(const ScalarField& f, int r_lo, int r_hi);

}  // namespace paraflow::fitting
