#include "logman/poisson_green.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "logman/certificate.hpp"
#include "logman/error.hpp"
#include "logman/fitting.hpp"

namespace logman {

GreenKernel::GreenKernel(ModelManifold M) : M_(std::move(M)) {
    if (!is_nonparabolic(M_)) throw HypothesisError("the model is parabolic: no Green kernel");
}

double GreenKernel::tail(double r) const {
    if (!(r > 0.0)) throw DomainError("Green kernel needs r > 0");
    if (std::isinf(r)) return 0.0;
    const double e = 1.0 - M_.dimension();
    auto f = [&](double s) {
        const double v = std::pow(M_.g(s), e);
        return std::isfinite(v) ? v : 0.0;
    };
    static thread_local boost::math::quadrature::exp_sinh<double> integrator;
    double err = 0.0;
    const double t = integrator.integrate(f, r, std::numeric_limits<double>::infinity(), 1e-14, &err);
    if (!std::isfinite(t)) throw NumericalError("Green tail integral did not converge");
    return t;
}

double green_radial(const ModelManifold& M, double r) { return GreenKernel(M)(r); }

PoissonResult poisson_solve(const ModelManifold& M, const RadialField& rho) {
    const GreenKernel G(M);
    const auto& grid = rho.grid();
    if (!grid->has_pole()) throw DomainError("poisson_solve needs a ball grid");
    for (double x : rho.values())
        if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("poisson_solve needs a finite rho >= 0");

    PoissonResult out;
    const auto geo = make_geometry(M, grid);
    const auto& k = geo->face();
    const auto& V = geo->volume();
    const std::size_t N = grid->size() - 1;

    // Support reaching the outer node must decay fast enough to be integrable.
    if (rho.values().back() > 0.0) {
        std::vector<double> x, y;
        for (std::size_t i = N / 2; i <= N; ++i) {
            if (rho[i] <= 0.0) continue;
            x.push_back(std::log(rho.r(i)));
            y.push_back(std::log(rho[i] * M.density(rho.r(i))));
        }
        const auto fit = fit_line(x, y);
        if (!fit.degenerate && fit.slope >= -1.05)
            throw DomainError("rho does not look integrable: rho g^(m-1) ~ r^" + format_double(fit.slope));
        out.notes.push_back("rho is truncated at r = " + format_double(grid->outer()));
    }

    std::vector<double> flux(N);
    double S = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        S += V[i] * rho[i];
        flux[i] = S;
    }
    const double enclosed = S + V[N] * rho[N];
    out.mass = M.omega() * enclosed;

    std::vector<double> v(N + 1);
    v[N] = -G.tail(grid->outer()) * enclosed;
    for (std::size_t i = N; i-- > 0;) v[i] = v[i + 1] - flux[i] / k[i];
    out.v = RadialField(grid, std::move(v));

    const auto lap = RadialOperator(geo, std::vector<double>(N + 1, 0.0)).apply(out.v.values());
    for (std::size_t i = 0; i < N; ++i) out.residual = std::max(out.residual, std::abs(lap[i] - rho[i]));
    out.max_value = *std::max_element(out.v.values().begin(), out.v.values().end());
    if (out.max_value > 0.0) throw NumericalError("Poisson potential is positive somewhere", out.v.values());
    return out;
}

LogSubstitution log_substitution(const ModelManifold& M, const RadialField& v, const RadialField* rho) {
    const auto& grid = v.grid();
    const auto geo = make_geometry(M, grid);
    const std::size_t n = grid->size();
    const RadialOperator lap(geo, std::vector<double>(n, 0.0));

    std::vector<double> source;
    if (rho) {
        if (rho->size() != n) throw DomainError("rho and v live on different grids");
        source = rho->values();
    } else {
        source = lap.apply(v.values());
    }

    LogSubstitution out;
    std::vector<double> phi(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(v[i])) throw DomainError("log substitution needs a finite v");
        double e = -v[i];
        if (e > 700.0) {
            e = 700.0;
            out.clamped = true;
        }
        phi[i] = std::exp(e);
    }
    if (out.clamped) out.notes.push_back("exponent clamped at 700 where v < -700");
    out.phi = RadialField(grid, std::move(phi));

    const auto Lphi = lap.apply(out.phi.values());
    const auto d = gradient(out.phi);
    for (std::size_t i = grid->first_unknown(); i <= grid->last_unknown(); ++i) {
        const double r = Lphi[i] + source[i] * out.phi[i] - d[i] * d[i] / out.phi[i];
        out.residual = std::max(out.residual, std::abs(r));
    }
    return out;
}

}  // namespace logman
