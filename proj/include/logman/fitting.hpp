#pragma once

#include <span>

namespace logman {

/// Ordinary least-squares line y = intercept + slope * x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    bool degenerate = true;  // fewer than two distinct abscissae
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Fit of F(r) ~ c * r^s * (log r)^l, used to decide asymptotic
/// integrability questions where logarithmic factors matter.
struct PowerLogFit {
    double exponent = 0.0;      // s
    double log_exponent = 0.0;  // l (0 when the two-term fit was ill-posed)
    bool with_log_term = false;
    bool degenerate = true;
};

/// Samples must satisfy r > 1 and F > 0. Falls back to a pure power fit
/// when the range is too narrow to separate r^s from (log r)^l.
PowerLogFit fit_power_log(std::span<const double> r, std::span<const double> F);

}  // namespace logman
