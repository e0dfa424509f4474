#pragma once

#include <optional>

#include "logman/certificate.hpp"
#include "logman/logistic_solver.hpp"
#include "logman/radial_ode.hpp"

namespace logman {

/// Decreasing profile on [R, R+T] solving
///   alpha'' + (m-1) g'/g alpha' - A alpha - (B + eps) alpha^sigma = 0,
///   alpha(R) = alpha0, alpha(R+T) = 0.
struct AnnulusProfile {
    RadialField alpha;
    double R = 0.0, T = 0.0, T_o = 0.0;
    double alpha0 = 0.0, eps = 0.0, sigma = 2.0;
    double derivative_R = 0.0;      ///< alpha'(R)
    double derivative_outer = 0.0;  ///< alpha'(R+T)
    double bound_lhs = 0.0;         ///< |alpha'(R)|
    double bound_rhs = 0.0;         ///< (g(R+T_o)/g(R))^{m-1} {T_o max[A + (B+eps) alpha0^{sigma-1}] + 1/T_o} alpha0
    int sweeps = 0;
};

/// Solves the annulus problem by monotone iteration between 0 and the
/// harmonic profile with the same boundary data, then checks alpha > 0,
/// alpha' < 0 and the derivative bound (T_o defaults to T). B >= 0 is
/// accepted so that the linear case can be reproduced.
AnnulusProfile annulus_subsolution(const ModelManifold& M, const RadialFunction& A_minus,
                                   const RadialFunction& B, double sigma, double R, double T,
                                   double alpha0, double eps, int n = 2000,
                                   std::optional<double> T_o = std::nullopt);

/// tau = sup over [0,R] of r (m-1) g'/g, including the pole limit.
double warp_sup(const ModelManifold& M, double R, int samples = 4000);

/// R inf_{[0,R]} a  >  (1 + tau)(1/T_o + T_o max_{[R,R+T_o]} a_-)(g(R+T_o)/g(R))^{m-1}.
CertificateReport existence_condition(const ModelManifold& M, const RadialFunction& a, double R,
                                      double T_o, int samples = 4000);

struct InteriorProfile {
    RadialField beta;  ///< alpha0 (1 + (R^2 - r^2) eta) on [0,R]
    double R = 0.0, T_o = 0.0, sigma = 2.0, eps = 0.0;
    double alpha0 = 0.0, eta = 0.0, eta_min = 0.0, eta_max = 0.0;
    double tau = 0.0;
    int halvings = 0;
    /// min over the grid of beta'' + Delta r beta' + a beta - b beta^sigma.
    double pointwise_min = 0.0;

    double derivative_R() const { return -2.0 * eta * R * alpha0; }
};

/// Halves alpha0 until the window [eta_min, eta_max] is nonempty and beta
/// satisfies the differential inequality at every node, then takes the
/// window midpoint. eps defaults to 1e-3 max_{[R,R+T_o]} b.
InteriorProfile interior_subsolution(const LogisticProblem& problem, double R, double T_o,
                                     double alpha0 = 1.0, std::optional<double> eps = std::nullopt,
                                     int n = 2000, int max_halvings = 60);

struct GlobalSubsolution {
    InteriorProfile interior;
    AnnulusProfile annulus;
    RadialField u;               ///< beta, then alpha, then zeros out to the outer radius
    double kink_inner = 0.0;     ///< beta'(R) - alpha'(R), must be <= 0
    double kink_outer = 0.0;     ///< alpha'(R+T_o), must be <= 0
    double pointwise_min = 0.0;  ///< over nodes away from the two interfaces

    double value(double r) const;
    double derivative(double r) const;
};

/// Assembles u_- and checks continuity and both kink signs; the outer radius
/// of the zero tail defaults to R + 2 T_o.
GlobalSubsolution glue_subsolution(const LogisticProblem& problem, const InteriorProfile& interior,
                                   const AnnulusProfile& annulus,
                                   std::optional<double> outer_radius = std::nullopt, double tol = 1e-8);

/// Whole construction: existence condition, interior profile, annulus with
/// A = a_-, B = b and the same eps, gluing.
GlobalSubsolution build_subsolution(const LogisticProblem& problem, double R, double T_o, int n = 2000,
                                    std::optional<double> outer_radius = std::nullopt);

/// Weak form  int (-u' phi' + a u phi - b u^sigma phi) dvol  for the hat
/// function phi rising from r_lo to 1 at r_peak and back to 0 at r_hi.
double weak_pairing(const LogisticProblem& problem, const GlobalSubsolution& s, double r_lo,
                    double r_peak, double r_hi);

}  // namespace logman
