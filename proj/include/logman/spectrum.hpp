#pragma once

#include <span>
#include <vector>

#include "logman/certificate.hpp"
#include "logman/radial_ode.hpp"

namespace logman {

struct SpectralOptions {
    int n = 2000;                     ///< interior nodes on the largest ball
    double monotonicity_tol = 1e-8;   ///< allowed increase of lambda_1(R) along a schedule
    int max_iter = 50;                ///< inverse-iteration steps
};

struct SpectralResult {
    /// Single radius: the eigenvalue. Schedule: the extrapolated limit.
    double eigenvalue = 0.0;
    /// Positive eigenfunction on the (last) ball, int phi^2 dV = 1.
    RadialField eigenfunction;
    std::vector<double> radii;
    std::vector<double> sequence;
    /// Last entry of the sequence: an upper bound for the limit by monotonicity.
    double upper_bound = 0.0;
    /// Quadratic extrapolation in 1/R through the last three entries.
    double extrapolated = 0.0;
    bool monotone = true;
    double max_increase = 0.0;
    int iterations = 0;
    /// Sign verdict of spectrum_bottom, read off the last radius (a negative
    /// entry of a non-increasing sequence certifies a negative limit).
    bool nonnegative = true;
    double sign_tolerance = 0.0;
};

/// Smallest Dirichlet eigenvalue of -(Delta + mu a) on B_R.
SpectralResult dirichlet_bottom(const ModelManifold& M, const RadialFunction& a, double mu, double R,
                                const SpectralOptions& opt = {});
SpectralResult dirichlet_bottom(const GeometryPtr& geo, std::span<const double> a, double mu,
                                const SpectralOptions& opt = {});

/// Smallest positive lambda with Delta phi + lambda a phi = 0 on B_R,
/// phi = 0 on the boundary. Throws HypothesisError when a <= 0 on the ball.
SpectralResult principal_eigenvalue(const ModelManifold& M, const RadialFunction& a, double R,
                                    const SpectralOptions& opt = {});
SpectralResult principal_eigenvalue(const GeometryPtr& geo, std::span<const double> a,
                                    const SpectralOptions& opt = {});

/// lambda_1(R_k) along an increasing schedule (>= 4 radii) and its limit.
/// Throws NumericalError when the sequence increases by more than the
/// monotonicity tolerance.
SpectralResult lambda_star(const ModelManifold& M, const RadialFunction& a,
                           std::span<const double> schedule, const SpectralOptions& opt = {});

/// lambda_1(L_mu, R_k) along the schedule, its limit and sign verdict.
SpectralResult spectrum_bottom(const ModelManifold& M, const RadialFunction& a, double mu,
                               std::span<const double> schedule, const SpectralOptions& opt = {});

/// Locates the sign change of the spectral bottom in mu and compares it with
/// the lambda_* bound from the same schedule. Passes when the relative gap
/// is at most 5%.
CertificateReport duality_check(const ModelManifold& M, const RadialFunction& a,
                                std::span<const double> schedule, std::span<const double> mu_grid,
                                const SpectralOptions& opt = {});

/// Quadratic form of -(Delta_h + mu a) divided by the mass norm, for a
/// field vanishing at the outer node.
double rayleigh_quotient(const RadialGeometry& geo, std::span<const double> a, double mu,
                         std::span<const double> phi);

}  // namespace logman
