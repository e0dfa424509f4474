#include "logman/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "logman/error.hpp"
#include "logman/parallel.hpp"

namespace logman {

namespace {

// Symmetric tridiagonal S = V^{-1/2} K V^{-1/2} of the Dirichlet stiffness on
// the unknowns, together with the node weights it is scaled by.
struct Scaled {
    std::vector<double> d, e, sqrtV;
    std::size_t first = 0;
};

Scaled scaled_stiffness(const RadialGeometry& geo) {
    const auto& grid = *geo.grid();
    const auto& k = geo.face();
    const auto& V = geo.volume();
    const std::size_t i0 = grid.first_unknown(), n = grid.unknown_count();
    Scaled s;
    s.first = i0;
    s.d.resize(n);
    s.e.resize(n > 0 ? n - 1 : 0);
    s.sqrtV.resize(n);
    for (std::size_t j = 0; j < n; ++j) s.sqrtV[j] = std::sqrt(V[i0 + j]);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t i = i0 + j;
        s.d[j] = ((i > 0 ? k[i - 1] : 0.0) + k[i]) / V[i];
        if (j + 1 < n) s.e[j] = -k[i] / (s.sqrtV[j] * s.sqrtV[j + 1]);
    }
    return s;
}

// Number of negative eigenvalues of T - x W (W diagonal).
int sturm_count(const std::vector<double>& d, const std::vector<double>& e,
                const std::vector<double>& w, double x) {
    int count = 0;
    double p = 1.0;
    for (std::size_t j = 0; j < d.size(); ++j) {
        double q = d[j] - x * w[j];
        if (j > 0) q -= e[j - 1] * e[j - 1] / p;
        if (q == 0.0) q = -std::numeric_limits<double>::min() * 1e10;
        if (q < 0.0) ++count;
        p = q;
    }
    return count;
}

// Solves (T - s W) x = y by symmetric elimination; T - s W must be definite.
std::vector<double> solve_shifted(const std::vector<double>& d, const std::vector<double>& e,
                                  const std::vector<double>& w, double s,
                                  const std::vector<double>& y) {
    const std::size_t n = d.size();
    std::vector<double> piv(n), z(n), x(n);
    for (std::size_t j = 0; j < n; ++j) {
        double p = d[j] - s * w[j];
        double r = y[j];
        if (j > 0) {
            const double l = e[j - 1] / piv[j - 1];
            p -= l * e[j - 1];
            r -= l * z[j - 1];
        }
        if (p == 0.0 || !std::isfinite(p)) throw NumericalError("singular shifted eigen-system");
        piv[j] = p;
        z[j] = r;
    }
    x[n - 1] = z[n - 1] / piv[n - 1];
    for (std::size_t j = n - 1; j-- > 0;) x[j] = (z[j] - e[j] * x[j + 1]) / piv[j];
    return x;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::vector<double> tri_apply(const std::vector<double>& d, const std::vector<double>& e,
                              const std::vector<double>& x) {
    const std::size_t n = d.size();
    std::vector<double> y(n);
    for (std::size_t j = 0; j < n; ++j) {
        y[j] = d[j] * x[j];
        if (j > 0) y[j] += e[j - 1] * x[j - 1];
        if (j + 1 < n) y[j] += e[j] * x[j + 1];
    }
    return y;
}

// Inverse iteration x <- (T - sW)^{-1} W x from a positive start; returns the
// Rayleigh quotient x'Tx / x'Wx and leaves the unit vector in x.
double inverse_iteration(const std::vector<double>& d, const std::vector<double>& e,
                         const std::vector<double>& w, double s, int max_iter,
                         std::vector<double>& x, int& iterations) {
    const std::size_t n = d.size();
    x.assign(n, 1.0 / std::sqrt(static_cast<double>(n)));
    for (int it = 1; it <= max_iter; ++it) {
        std::vector<double> y(n);
        for (std::size_t j = 0; j < n; ++j) y[j] = w[j] * x[j];
        auto xn = solve_shifted(d, e, w, s, y);
        double norm = std::sqrt(dot(xn, xn));
        if (!(norm > 0.0) || !std::isfinite(norm))
            throw NumericalError("inverse iteration collapsed", x);
        double sum = 0.0;
        for (double v : xn) sum += v;
        if (sum < 0.0) norm = -norm;
        double change = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            xn[j] /= norm;
            change = std::max(change, std::abs(xn[j] - x[j]));
        }
        x = std::move(xn);
        iterations = it;
        if (change < 1e-12) {
            const auto Tx = tri_apply(d, e, x);
            double xwx = 0.0;
            for (std::size_t j = 0; j < n; ++j) xwx += w[j] * x[j] * x[j];
            return dot(x, Tx) / xwx;
        }
    }
    throw NumericalError("inverse iteration did not converge in " + std::to_string(max_iter) +
                             " steps",
                         x);
}

RadialField to_eigenfunction(const GeometryPtr& geo, const Scaled& s, const std::vector<double>& x) {
    const auto& grid = geo->grid();
    std::vector<double> phi(grid->size(), 0.0);
    double mass = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        phi[s.first + j] = x[j] / s.sqrtV[j];
        mass += x[j] * x[j];
    }
    const double scale = 1.0 / std::sqrt(mass * geo->manifold().omega());
    for (auto& v : phi) v *= scale;
    return {grid, std::move(phi)};
}

void check_a(std::span<const double> a, const RadialGrid& grid) {
    if (a.size() != grid.size()) throw DomainError("coefficient size does not match grid");
}

double extrapolate(const std::vector<double>& R, const std::vector<double>& y) {
    const std::size_t n = y.size();
    if (n < 3) return y.back();
    double x[3], v[3];
    for (int j = 0; j < 3; ++j) {
        x[j] = 1.0 / R[n - 3 + j];
        v[j] = y[n - 3 + j];
    }
    double L = 0.0;
    for (int j = 0; j < 3; ++j) {
        double w = 1.0;
        for (int l = 0; l < 3; ++l)
            if (l != j) w *= (0.0 - x[l]) / (x[j] - x[l]);
        L += w * v[j];
    }
    return std::min(L, y.back());
}

struct Schedule {
    std::vector<double> radii;
    std::vector<GeometryPtr> geo;
    std::vector<std::vector<double>> a;
};

Schedule make_schedule(const ModelManifold& M, const RadialFunction& a,
                       std::span<const double> radii, const SpectralOptions& opt) {
    if (radii.size() < 4) throw DomainError("radius schedule needs at least 4 entries");
    Schedule s;
    s.radii.assign(radii.begin(), radii.end());
    const auto grids = RadialGrid::nested_balls(radii, opt.n);
    s.geo = parallel_map(grids.size(), [&](std::size_t k) { return make_geometry(M, grids[k]); });
    for (const auto& g : grids) s.a.push_back(sample(a, *g));
    return s;
}

SpectralResult run_schedule(const Schedule& s, const SpectralOptions& opt, bool principal, double mu) {
    auto per_radius = parallel_map(s.radii.size(), [&](std::size_t k) {
        return principal ? principal_eigenvalue(s.geo[k], s.a[k], opt)
                         : dirichlet_bottom(s.geo[k], s.a[k], mu, opt);
    });
    SpectralResult out;
    out.radii = s.radii;
    for (const auto& r : per_radius) {
        out.sequence.push_back(r.eigenvalue);
        out.iterations += r.iterations;
    }
    out.eigenfunction = per_radius.back().eigenfunction;
    out.upper_bound = out.sequence.back();
    for (std::size_t k = 0; k + 1 < out.sequence.size(); ++k) {
        const double inc = out.sequence[k + 1] - out.sequence[k];
        out.max_increase = std::max(out.max_increase, inc);
        if (inc > opt.monotonicity_tol * std::max(1.0, std::abs(out.sequence[k]))) out.monotone = false;
    }
    if (!out.monotone)
        throw NumericalError("eigenvalue sequence increases along the schedule by " +
                                 format_double(out.max_increase) + "; refine the mesh",
                             out.sequence);
    out.extrapolated = extrapolate(out.radii, out.sequence);
    out.eigenvalue = out.extrapolated;
    return out;
}

}  // namespace

double rayleigh_quotient(const RadialGeometry& geo, std::span<const double> a, double mu,
                         std::span<const double> phi) {
    const auto& k = geo.face();
    const auto& V = geo.volume();
    const auto& grid = *geo.grid();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i + 1 < phi.size(); ++i) num += k[i] * (phi[i + 1] - phi[i]) * (phi[i + 1] - phi[i]);
    for (std::size_t i = grid.first_unknown(); i <= grid.last_unknown(); ++i) {
        num -= mu * a[i] * phi[i] * phi[i] * V[i];
        den += phi[i] * phi[i] * V[i];
    }
    return num / den;
}

SpectralResult dirichlet_bottom(const GeometryPtr& geo, std::span<const double> a, double mu,
                                const SpectralOptions& opt) {
    const auto& grid = *geo->grid();
    check_a(a, grid);
    Scaled s = scaled_stiffness(*geo);
    const std::size_t n = s.d.size();
    for (std::size_t j = 0; j < n; ++j) s.d[j] -= mu * a[s.first + j];
    const std::vector<double> w(n, 1.0);

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t j = 0; j < n; ++j) {
        const double rad = (j > 0 ? std::abs(s.e[j - 1]) : 0.0) + (j + 1 < n ? std::abs(s.e[j]) : 0.0);
        lo = std::min(lo, s.d[j] - rad);
        hi = std::max(hi, s.d[j] + rad);
    }
    lo -= 1e-12 * std::max(1.0, std::abs(lo));
    for (int it = 0; it < 300; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (sturm_count(s.d, s.e, w, mid) >= 1) hi = mid;
        else lo = mid;
    }
    std::vector<double> x;
    SpectralResult out;
    const double shift = lo - 1e-10 * std::max(1.0, std::abs(lo));
    out.eigenvalue = inverse_iteration(s.d, s.e, w, shift, opt.max_iter, x, out.iterations);
    out.eigenfunction = to_eigenfunction(geo, s, x);
    out.radii = {grid.outer()};
    out.sequence = {out.eigenvalue};
    out.upper_bound = out.extrapolated = out.eigenvalue;
    out.sign_tolerance = 1e-6 * std::abs(out.eigenvalue) + 1e-9;
    out.nonnegative = out.eigenvalue >= -out.sign_tolerance;
    return out;
}

SpectralResult dirichlet_bottom(const ModelManifold& M, const RadialFunction& a, double mu, double R,
                                const SpectralOptions& opt) {
    auto geo = make_geometry(M, RadialGrid::ball(R, opt.n));
    return dirichlet_bottom(geo, sample(a, *geo->grid()), mu, opt);
}

SpectralResult principal_eigenvalue(const GeometryPtr& geo, std::span<const double> a,
                                    const SpectralOptions& opt) {
    const auto& grid = *geo->grid();
    check_a(a, grid);
    Scaled s = scaled_stiffness(*geo);
    const std::size_t n = s.d.size();
    std::vector<double> w(n);
    bool positive = false;
    for (std::size_t j = 0; j < n; ++j) {
        w[j] = a[s.first + j];
        positive = positive || w[j] > 0.0;
    }
    if (!positive)
        throw HypothesisError("no principal eigenvalue: a <= 0 on the ball of radius " +
                              format_double(grid.outer()));

    double lo = 0.0, hi = 1.0;
    int doublings = 0;
    while (sturm_count(s.d, s.e, w, hi) < 1) {
        lo = hi;
        hi *= 2.0;
        if (++doublings > 2000) throw NumericalError("principal eigenvalue bracket failed");
    }
    for (int it = 0; it < 300; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (sturm_count(s.d, s.e, w, mid) >= 1) hi = mid;
        else lo = mid;
    }
    std::vector<double> x;
    SpectralResult out;
    const double shift = lo * (1.0 - 1e-10);
    out.eigenvalue = inverse_iteration(s.d, s.e, w, shift, opt.max_iter, x, out.iterations);
    out.eigenfunction = to_eigenfunction(geo, s, x);
    out.radii = {grid.outer()};
    out.sequence = {out.eigenvalue};
    out.upper_bound = out.extrapolated = out.eigenvalue;
    return out;
}

SpectralResult principal_eigenvalue(const ModelManifold& M, const RadialFunction& a, double R,
                                    const SpectralOptions& opt) {
    auto geo = make_geometry(M, RadialGrid::ball(R, opt.n));
    return principal_eigenvalue(geo, sample(a, *geo->grid()), opt);
}

SpectralResult lambda_star(const ModelManifold& M, const RadialFunction& a,
                           std::span<const double> schedule, const SpectralOptions& opt) {
    const auto s = make_schedule(M, a, schedule, opt);
    auto out = run_schedule(s, opt, true, 0.0);
    out.extrapolated = std::max(0.0, out.extrapolated);
    out.eigenvalue = out.extrapolated;
    return out;
}

SpectralResult spectrum_bottom(const ModelManifold& M, const RadialFunction& a, double mu,
                               std::span<const double> schedule, const SpectralOptions& opt) {
    const auto s = make_schedule(M, a, schedule, opt);
    auto out = run_schedule(s, opt, false, mu);
    // The sequence is non-increasing, so a negative entry certifies a negative
    // limit; the sign is read off the last (largest) radius.
    out.sign_tolerance = 1e-6 * std::abs(out.upper_bound) + 1e-9;
    out.nonnegative = out.upper_bound >= -out.sign_tolerance;
    return out;
}

CertificateReport duality_check(const ModelManifold& M, const RadialFunction& a,
                                std::span<const double> schedule, std::span<const double> mu_grid,
                                const SpectralOptions& opt) {
    if (mu_grid.size() < 2) throw DomainError("duality check needs at least two values of mu");
    for (std::size_t j = 1; j < mu_grid.size(); ++j)
        if (!(mu_grid[j] > mu_grid[j - 1])) throw DomainError("mu grid must be increasing");

    const auto s = make_schedule(M, a, schedule, opt);
    auto ls = run_schedule(s, opt, true, 0.0);
    const double lstar = ls.upper_bound;

    auto bottom = [&](double mu) { return run_schedule(s, opt, false, mu).upper_bound; };
    auto nonneg = [](double v) { return v >= -(1e-6 * std::abs(v) + 1e-9); };

    std::vector<double> values;
    for (double mu : mu_grid) values.push_back(bottom(mu));
    std::size_t cell = mu_grid.size();
    for (std::size_t j = 0; j + 1 < mu_grid.size(); ++j) {
        if (nonneg(values[j]) && !nonneg(values[j + 1])) {
            cell = j;
            break;
        }
    }
    if (cell == mu_grid.size())
        throw InconclusiveError("spectral bottom does not change sign on the mu grid");

    double lo = mu_grid[cell], hi = mu_grid[cell + 1];
    for (int it = 0; it < 60 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (bottom(mid) >= 0.0) lo = mid;
        else hi = mid;
    }
    const double flip = 0.5 * (lo + hi);

    CertificateReport rep("duality of lambda_* and the spectral bottom",
                          "lambda_* coincides with the sign change of the spectral bottom");
    const double gap = std::abs(flip - lstar) / std::max(lstar, 1e-300);
    rep.add("relative gap |mu_flip - lambda_*| / lambda_*", gap, 0.05, gap <= 0.05,
            "mu_flip = " + format_double(flip) + ", lambda_* = " + format_double(lstar));

    int mismatches = 0;
    for (std::size_t j = 0; j < mu_grid.size(); ++j) {
        const bool negative = !nonneg(values[j]);
        const bool above = mu_grid[j] > flip;
        if (negative != above && j != cell && j != cell + 1) ++mismatches;
    }
    rep.add("dichotomy: mu > mu_flip iff bottom < 0", mismatches, 0.0, mismatches == 0,
            std::to_string(mu_grid.size()) + " grid values");
    rep.note("lambda_* extrapolated in 1/R = " + format_double(std::max(0.0, ls.extrapolated)));
    rep.note("mu_flip = " + format_double(flip));
    return rep;
}

}  // namespace logman
