#include "logman/fitting.hpp"

#include <cmath>
#include <vector>

namespace logman {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    LineFit fit;
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) return fit;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 1e-300) || !std::isfinite(sxx) || !std::isfinite(sxy)) return fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.degenerate = false;
    return fit;
}

PowerLogFit fit_power_log(std::span<const double> r, std::span<const double> F) {
    PowerLogFit out;
    const std::size_t n = r.size();
    if (n < 2 || F.size() != n) return out;

    std::vector<double> x1(n), x2(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x1[i] = std::log(r[i]);
        x2[i] = std::log(std::log(r[i]));
        y[i] = std::log(F[i]);
    }

    const LineFit pure = fit_line(x1, y);
    if (pure.degenerate) return out;
    out.exponent = pure.slope;
    out.degenerate = false;

    // Two-regressor least squares; only trusted when log log r varies
    // enough across the range to be distinguishable from log r.
    if (n < 4) return out;
    double m1 = 0, m2 = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        m1 += x1[i];
        m2 += x2[i];
        my += y[i];
    }
    m1 /= n;
    m2 /= n;
    my /= n;
    double s11 = 0, s12 = 0, s22 = 0, s1y = 0, s2y = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d1 = x1[i] - m1, d2 = x2[i] - m2, dy = y[i] - my;
        s11 += d1 * d1;
        s12 += d1 * d2;
        s22 += d2 * d2;
        s1y += d1 * dy;
        s2y += d2 * dy;
    }
    const double det = s11 * s22 - s12 * s12;
    const double x2_range = x2.back() - x2.front();
    if (det > 1e-10 * s11 * s22 && std::abs(x2_range) > 0.5) {
        out.exponent = (s22 * s1y - s12 * s2y) / det;
        out.log_exponent = (s11 * s2y - s12 * s1y) / det;
        out.with_log_term = true;
    }
    return out;
}

}  // namespace logman
