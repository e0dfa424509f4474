#pragma once

#include <string>
#include <vector>

#include "logman/model_manifold.hpp"
#include "logman/radial_ode.hpp"

namespace logman {

/// Minimal positive Green kernel of a non-parabolic model, radial in the
/// distance from the pole: G(r) = t(r) / omega with t(r) = int_r^inf g^{1-m}.
class GreenKernel {
public:
    /// Throws HypothesisError for parabolic models.
    explicit GreenKernel(ModelManifold M);

    const ModelManifold& manifold() const noexcept { return M_; }
    /// t(r), r > 0.
    double tail(double r) const;
    double operator()(double r) const { return tail(r) / M_.omega(); }

private:
    ModelManifold M_;
};

double green_radial(const ModelManifold& M, double r);

struct PoissonResult {
    RadialField v;
    double mass = 0.0;       ///< int rho dV over the grid
    double residual = 0.0;   ///< sup |Delta_h v - rho| over unknowns
    double max_value = 0.0;  ///< sup v, must be <= 0
    std::vector<std::string> notes;
};

/// Solves Delta v = rho with v -> 0 at infinity, rho >= 0 given on a ball
/// grid and taken as zero beyond it. Fluxes are accumulated cell by cell so
/// the discrete equation holds to rounding; the outer value is -t(R) times
/// the enclosed mass, the exterior Green potential.
PoissonResult poisson_solve(const ModelManifold& M, const RadialField& rho);

struct LogSubstitution {
    RadialField phi;         ///< e^{-v}
    double residual = 0.0;   ///< sup |Delta_h phi + rho phi - |phi'|^2 / phi|
    bool clamped = false;
    std::vector<std::string> notes;
};

/// phi = e^{-v} and the residual of Delta phi + rho phi = |grad phi|^2 / phi,
/// where rho defaults to the discrete Laplacian of v. Exponents above 700
/// are clamped and flagged.
LogSubstitution log_substitution(const ModelManifold& M, const RadialField& v,
                                 const RadialField* rho = nullptr);

}  // namespace logman
