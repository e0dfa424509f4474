#pragma once

// Independent reference computations used as test oracles. None of these
// touch the library's discretization.

#include <functional>
#include <vector>

namespace oracle {

/// coth x from exponentials in long double.
double coth(double x);

/// First positive zero of J0 by power series and bisection on [2, 3].
double bessel_j0_first_zero();

/// Smallest Dirichlet eigenvalue of -w'' + q(r) w = lambda * rho(r) w on
/// (0, L), rho > 0, second-order finite differences with n interior nodes,
/// bisection on a Sturm count.
double sturm_bottom(const std::function<double(double)>& q,
                    const std::function<double(double)>& rho, double L, int n);

/// Classical RK4 for y' = f(t, y) on a system, returns y at t1.
std::vector<double> rk4(const std::function<std::vector<double>(double, const std::vector<double>&)>& f,
                        double t0, double t1, std::vector<double> y0, int steps);

/// Shooting for alpha'' + k(r) alpha' = A(r) alpha + B(r) alpha^sigma on
/// [R, R+T], alpha(R) = alpha0, alpha(R+T) = 0. Returns alpha'(R).
double shoot_annulus(const std::function<double(double)>& k, const std::function<double(double)>& A,
                     const std::function<double(double)>& B, double sigma, double R, double T,
                     double alpha0);

/// alpha at radius r of the same shooting solution.
double shoot_annulus_value(const std::function<double(double)>& k,
                           const std::function<double(double)>& A,
                           const std::function<double(double)>& B, double sigma, double R,
                           double T, double alpha0, double r);

}  // namespace oracle
