#pragma once

#include <string>
#include <vector>

namespace logman {

enum class WarpingFamily { euclidean, hyperbolic, power, tabulated };

std::string to_string(WarpingFamily family);

/// Warping function g of a rotationally symmetric metric dr^2 + g(r)^2 dtheta^2.
///
/// Every family satisfies g(0) = 0, g > 0 and g' >= 0 for r > 0. The
/// euclidean, hyperbolic and tabulated families have a smooth pole
/// (g'(0) = 1); the power family r^{B'} is admitted for B' >= 1 and its
/// pole behaviour is exposed through pole_order().
class WarpingFunction {
public:
    static WarpingFunction euclidean();
    /// g(r) = sinh(sqrt(B) r) / sqrt(B), B > 0.
    static WarpingFunction hyperbolic(double curvature_scale);
    /// g(r) = r^{B'}, B' >= 1.
    static WarpingFunction power(double exponent);
    /// Monotone cubic (Fritsch-Carlson) interpolant through (r_i, g_i).
    /// Requires r_0 = 0, g_0 = 0, strictly increasing r, non-decreasing g.
    static WarpingFunction tabulated(std::vector<double> r, std::vector<double> g);
    /// Two-column CSV file "r,g" (a header line is skipped if present).
    static WarpingFunction from_csv(const std::string& path);

    double value(double r) const;
    double derivative(double r) const;

    /// lim_{r->0} r g'(r) / g(r): 1 for a smooth pole, B' for the power family.
    double pole_order() const;

    /// Largest radius where g is defined (finite only for tabulated data).
    double max_radius() const;

    WarpingFamily family() const noexcept { return family_; }
    /// B for hyperbolic, B' for power, 0 otherwise.
    double parameter() const noexcept { return param_; }

private:
    WarpingFamily family_ = WarpingFamily::euclidean;
    double param_ = 0.0;
    double sqrt_param_ = 0.0;
    std::vector<double> r_, g_, slope_;
};

/// R^m with the metric dr^2 + g(r)^2 dtheta^2; the origin is a pole.
class ModelManifold {
public:
    ModelManifold(int dimension, WarpingFunction warping);

    static ModelManifold euclidean(int m) { return {m, WarpingFunction::euclidean()}; }
    static ModelManifold hyperbolic(int m, double B) { return {m, WarpingFunction::hyperbolic(B)}; }

    int dimension() const noexcept { return m_; }
    const WarpingFunction& warping() const noexcept { return warping_; }
    /// Area of the unit (m-1)-sphere.
    double omega() const noexcept { return omega_; }

    double g(double r) const { return warping_.value(r); }
    double dg(double r) const { return warping_.derivative(r); }
    /// g(r)^{m-1}, the polar density of the Riemannian measure (without omega).
    double density(double r) const;

private:
    int m_;
    WarpingFunction warping_;
    double omega_;
};

/// 2 pi^{m/2} / Gamma(m/2).
double unit_sphere_area(int m);

/// (m-1) g'(r)/g(r), the Laplacian of the distance function. Throws
/// DomainError for r <= 0.
double warp_coefficient(const ModelManifold& M, double r);

/// omega * int_0^r g^{m-1}.
double ball_volume(const ModelManifold& M, double r);

/// omega * g(r)^{m-1}.
double sphere_area(const ModelManifold& M, double r);

enum class Verdict { holds, fails, inconclusive };

std::string to_string(Verdict v);

enum class GrowthMode {
    power_law,   ///< vol B_r = O(r^s) or O(r^s log r)
    log_volume,  ///< liminf log vol B_r / r^s < infinity
};

struct GrowthClassification {
    GrowthMode mode = GrowthMode::power_law;
    double fitted_exponent = 0.0;  ///< slope in log-log coordinates
    double exponential_rate = 0.0; ///< slope of log vol against r
    double target = 0.0;
    double slack = 0.0;            ///< absolute slack added to target
    bool with_log_factor = false;
    Verdict verdict = Verdict::inconclusive;
    std::string note;
};

struct RadiusRange {
    double lo = 10.0;
    double hi = 1000.0;
};

/// Decides vol B_r = O(r^target [log r]) by a least-squares fit of
/// log vol against log r over the range. slack_fraction is relative to
/// the target. Throws DomainError when the range spans less than a decade.
GrowthClassification classify_growth(const ModelManifold& M, double exponent_target,
                                     bool with_log_factor, RadiusRange range,
                                     double slack_fraction = 0.05);

/// Decides liminf log vol B_r / r^power < infinity by fitting the
/// growth order of log vol B_r (absolute slack 0.05).
GrowthClassification classify_log_volume_growth(const ModelManifold& M, double power,
                                                RadiusRange range);

/// True iff int_1^inf g^{1-m} converges. Throws InconclusiveError for
/// tabulated warping functions.
bool is_nonparabolic(const ModelManifold& M);

}  // namespace logman
