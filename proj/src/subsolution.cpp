#include "logman/subsolution.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "logman/error.hpp"

namespace logman {

namespace {

using boost::math::quadrature::gauss;

double pow_ratio(const ModelManifold& M, double R, double T_o) {
    return std::pow(M.g(R + T_o) / M.g(R), M.dimension() - 1);
}

// r (m-1) g'/g, with its limit at the pole.
double r_warp(const ModelManifold& M, double r) {
    if (r <= 0.0) return (M.dimension() - 1) * M.warping().pole_order();
    return r * warp_coefficient(M, r);
}

double max_over(const RadialFunction& f, double lo, double hi, int samples) {
    double top = -HUGE_VAL;
    for (int k = 0; k <= samples; ++k) top = std::max(top, f(lo + (hi - lo) * k / samples));
    return top;
}

// alpha' at an end node from the conservative flux through the adjacent
// half cell: (g^{m-1} alpha')' = g^{m-1} (A alpha + B alpha^sigma).
double end_derivative(const ModelManifold& M, const RadialField& u, const RadialFunction& A,
                      const RadialFunction& B, double sigma, bool inner) {
    const std::size_t n = u.size();
    const std::size_t i0 = inner ? 0 : n - 1, i1 = inner ? 1 : n - 2;
    const double r0 = u.r(i0), r1 = u.r(i1), u0 = u[i0], u1 = u[i1];
    const double mid = 0.5 * (r0 + r1);
    const double slope = (u1 - u0) / (r1 - r0);
    auto source = [&](double s) {
        const double v = u0 + slope * (s - r0);
        return M.density(s) * (A(s) * v + B(s) * std::pow(std::max(v, 0.0), sigma));
    };
    const double flux_mid = M.density(mid) * slope;
    const double S = gauss<double, 7>::integrate(source, std::min(r0, mid), std::max(r0, mid));
    const double flux_end = inner ? flux_mid - S : flux_mid + S;
    return flux_end / M.density(r0);
}

}  // namespace

AnnulusProfile annulus_subsolution(const ModelManifold& M, const RadialFunction& A_minus,
                                   const RadialFunction& B, double sigma, double R, double T,
                                   double alpha0, double eps, int n, std::optional<double> T_o) {
    if (!(R > 0.0) || !(T > 0.0)) throw DomainError("annulus needs R > 0 and T > 0");
    if (!(alpha0 > 0.0)) throw DomainError("annulus boundary value alpha0 must be > 0");
    if (!(eps >= 0.0)) throw DomainError("eps must be >= 0");
    if (!(sigma > 1.0)) throw DomainError("sigma must be > 1");
    const double To = T_o.value_or(T);
    if (!(To > 0.0) || To > T * (1 + 1e-12)) throw DomainError("T_o must lie in (0, T]");

    auto geo = make_geometry(M, RadialGrid::annulus(R, R + T, n));
    const auto& grid = *geo->grid();
    BracketProblem p;
    p.geo = geo;
    p.sigma = sigma;
    p.inner_value = alpha0;
    p.outer_value = 0.0;
    p.a.resize(grid.size());
    p.b.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double am = A_minus(grid.node(i)), bv = B(grid.node(i));
        if (!(am >= 0.0)) throw DomainError("A_minus must be >= 0 on the annulus");
        if (!(bv >= 0.0)) throw DomainError("B must be >= 0 on the annulus");
        p.a[i] = -am;
        p.b[i] = bv + eps;
    }

    const std::vector<double> zeros(grid.size(), 0.0);
    const RadialField harmonic =
        solve_linear(assemble(geo, zeros), RadialField(geo->grid(), zeros), alpha0, 0.0);
    MonotoneOptions opt;
    opt.ascending = false;
    const auto rep = monotone_iteration(p, zeros, harmonic.values(), opt);

    AnnulusProfile out;
    out.alpha = rep.solution;
    out.R = R;
    out.T = T;
    out.T_o = To;
    out.alpha0 = alpha0;
    out.eps = eps;
    out.sigma = sigma;
    out.sweeps = rep.sweeps_descending;

    const auto& al = out.alpha;
    for (std::size_t i = 0; i + 1 < al.size(); ++i) {
        if (!(al[i] > 0.0))
            throw NumericalError("annulus profile not positive at r = " + format_double(al.r(i)),
                                 al.values());
        if (!(al[i + 1] < al[i]))
            throw NumericalError("annulus profile not decreasing at r = " + format_double(al.r(i)),
                                 al.values());
    }
    const RadialFunction Bp = [&](double s) { return B(s) + eps; };
    out.derivative_R = end_derivative(M, al, A_minus, Bp, sigma, true);
    out.derivative_outer = end_derivative(M, al, A_minus, Bp, sigma, false);
    if (!(out.derivative_R < 0.0))
        throw NumericalError("annulus profile has alpha'(R) >= 0", al.values());

    const RadialFunction coeff = [&](double s) {
        return A_minus(s) + (B(s) + eps) * std::pow(alpha0, sigma - 1.0);
    };
    out.bound_lhs = std::abs(out.derivative_R);
    out.bound_rhs = pow_ratio(M, R, To) * (To * max_over(coeff, R, R + To, 4000) + 1.0 / To) * alpha0;
    if (!(out.bound_lhs <= out.bound_rhs))
        throw NumericalError("derivative bound violated: |alpha'(R)| = " + format_double(out.bound_lhs) +
                                 " > " + format_double(out.bound_rhs),
                             al.values());
    return out;
}

double warp_sup(const ModelManifold& M, double R, int samples) {
    double tau = r_warp(M, 0.0);
    for (int k = 1; k <= samples; ++k) tau = std::max(tau, r_warp(M, R * k / samples));
    return tau;
}

CertificateReport existence_condition(const ModelManifold& M, const RadialFunction& a, double R,
                                      double T_o, int samples) {
    if (!(R > 0.0) || !(T_o > 0.0)) throw DomainError("existence condition needs R, T_o > 0");
    double inf_a = HUGE_VAL;
    for (int k = 0; k <= samples; ++k) inf_a = std::min(inf_a, a(R * k / samples));
    const double max_am = max_over([&](double s) { return std::max(0.0, -a(s)); }, R, R + T_o, samples);
    const double tau = warp_sup(M, R, samples);
    const double ratio = pow_ratio(M, R, T_o);
    const double lhs = R * inf_a;
    const double rhs = (1.0 + tau) * (1.0 / T_o + T_o * max_am) * ratio;

    CertificateReport rep("existence of a positive solution",
                          "a bounded non-negative non-trivial sub-solution exists");
    rep.add("R inf a > (1+tau)(1/T_o + T_o max a_-)(g(R+T_o)/g(R))^(m-1)", lhs, rhs, lhs > rhs,
            "tau = " + format_double(tau) + ", max a_- = " + format_double(max_am) +
                ", ratio = " + format_double(ratio));
    rep.note("R = " + format_double(R) + ", T_o = " + format_double(T_o));
    return rep;
}

InteriorProfile interior_subsolution(const LogisticProblem& problem, double R, double T_o, double alpha0,
                                     std::optional<double> eps, int n, int max_halvings) {
    if (!(R > 0.0) || !(T_o > 0.0)) throw DomainError("interior profile needs R, T_o > 0");
    if (!(alpha0 > 0.0)) throw DomainError("alpha0 must be > 0");
    const auto& M = problem.M;
    const double sigma = problem.sigma;
    auto grid = RadialGrid::ball(R, n);
    const auto a = sample(problem.a, *grid);
    const auto b = sample(problem.b, *grid);
    const double min_a = *std::min_element(a.begin(), a.end());
    const double max_b = *std::max_element(b.begin(), b.end());
    if (!(min_a > 0.0))
        throw HypothesisError("min a on B_R is " + format_double(min_a) + " <= 0, the eta window is empty");

    const int samples = 4000;
    std::vector<double> am_out(samples + 1), b_out(samples + 1);
    for (int k = 0; k <= samples; ++k) {
        const double s = R + T_o * k / samples;
        am_out[k] = std::max(0.0, -problem.a(s));
        b_out[k] = problem.b(s);
    }
    const double e = eps.value_or(1e-3 * *std::max_element(b_out.begin(), b_out.end()));
    const double tau = warp_sup(M, R, samples);
    const double ratio = pow_ratio(M, R, T_o);
    std::vector<double> rw(grid->size());
    for (std::size_t i = 0; i < rw.size(); ++i) rw[i] = r_warp(M, grid->node(i));

    InteriorProfile out;
    out.R = R;
    out.T_o = T_o;
    out.sigma = sigma;
    out.eps = e;
    out.tau = tau;

    double al = alpha0;
    for (int k = 0; k <= max_halvings; ++k, al *= 0.5) {
        const double w = std::pow(al, sigma - 1.0);
        double top = 0.0;
        for (int j = 0; j <= samples; ++j) top = std::max(top, am_out[j] + (b_out[j] + e) * w);
        const double eta_min = ratio * (1.0 / T_o + T_o * top) / (2.0 * R);

        // 2 eta (1+tau) + al^{sigma-1} R^sigma max b eta^sigma = min a
        auto f = [&](double eta) {
            return 2.0 * eta * (1.0 + tau) + w * std::pow(R * eta, sigma) * max_b - min_a;
        };
        double lo = 0.0, hi = min_a / (2.0 * (1.0 + tau));
        const bool saturated = f(hi) <= 0.0;
        if (!saturated) {
            for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
                const double m = 0.5 * (lo + hi);
                (f(m) > 0.0 ? hi : lo) = m;
            }
        }
        const double eta_max = saturated ? hi : lo;
        if (!(eta_min <= eta_max)) continue;

        const double eta = 0.5 * (eta_min + eta_max);
        std::vector<double> beta(grid->size());
        double worst = HUGE_VAL;
        for (std::size_t i = 0; i < beta.size(); ++i) {
            const double r = grid->node(i);
            beta[i] = al * (1.0 + (R * R - r * r) * eta);
            const double L = -2.0 * eta * al * (1.0 + rw[i]) + a[i] * beta[i] - b[i] * std::pow(beta[i], sigma);
            worst = std::min(worst, L);
        }
        if (worst < -1e-14 * std::max(1.0, beta[0])) continue;

        out.beta = RadialField(grid, std::move(beta));
        out.alpha0 = al;
        out.eta = eta;
        out.eta_min = eta_min;
        out.eta_max = eta_max;
        out.halvings = k;
        out.pointwise_min = worst;
        return out;
    }
    throw HypothesisError("eta window still empty after " + std::to_string(max_halvings) +
                          " halvings of alpha0; the existence condition is marginal");
}

double GlobalSubsolution::value(double r) const {
    const double R = interior.R;
    if (r <= R) return interior.alpha0 * (1.0 + (R * R - r * r) * interior.eta);
    if (r >= u.grid()->outer()) return 0.0;
    return u.value_at(r);
}

double GlobalSubsolution::derivative(double r) const {
    const double R = interior.R;
    if (r < R) return -2.0 * interior.eta * interior.alpha0 * r;
    if (r >= annulus.R + annulus.T) return 0.0;
    const auto& g = *annulus.alpha.grid();
    const std::size_t i = std::min(g.locate(r), g.size() - 2);
    return (annulus.alpha[i + 1] - annulus.alpha[i]) / (g.node(i + 1) - g.node(i));
}

GlobalSubsolution glue_subsolution(const LogisticProblem& problem, const InteriorProfile& interior,
                                   const AnnulusProfile& annulus, std::optional<double> outer_radius,
                                   double tol) {
    const double R = interior.R;
    if (std::abs(annulus.R - R) > 1e-12 * R) throw DomainError("interior and annulus radii differ");
    if (std::abs(interior.alpha0 - annulus.alpha0) > 1e-12 * std::max(interior.alpha0, annulus.alpha0))
        throw HypothesisError("continuity violated at R: beta(R) = " + format_double(interior.alpha0) +
                              ", alpha(R) = " + format_double(annulus.alpha0));
    if (std::abs(annulus.alpha.values().back()) > 1e-12 * annulus.alpha0)
        throw HypothesisError("continuity violated at R + T_o: alpha does not vanish");

    GlobalSubsolution s;
    s.interior = interior;
    s.annulus = annulus;
    s.kink_inner = interior.derivative_R() - annulus.derivative_R;
    s.kink_outer = annulus.derivative_outer;
    if (s.kink_inner > 0.0)
        throw HypothesisError("kink at R has beta'(R) - alpha'(R) = " + format_double(s.kink_inner) + " > 0");
    if (s.kink_outer > 0.0)
        throw HypothesisError("kink at R + T_o has alpha' = " + format_double(s.kink_outer) + " > 0");

    const auto& bg = *interior.beta.grid();
    const auto& ag = *annulus.alpha.grid();
    const double end = ag.outer();
    const double outer = outer_radius.value_or(R + 2.0 * annulus.T);
    std::vector<double> nodes, vals;
    for (std::size_t i = 0; i + 1 < bg.size(); ++i) {
        nodes.push_back(bg.node(i));
        vals.push_back(interior.beta[i]);
    }
    for (std::size_t i = 0; i < ag.size(); ++i) {
        nodes.push_back(ag.node(i));
        vals.push_back(i + 1 == ag.size() ? 0.0 : annulus.alpha[i]);
    }
    const double h = ag.node(1) - ag.node(0);
    const int tail = std::max(2, static_cast<int>(std::ceil((outer - end) / h)));
    const double step = std::max(outer - end, 2.0 * h) / tail;
    for (int k = 1; k <= tail; ++k) {
        nodes.push_back(end + k * step);
        vals.push_back(0.0);
    }
    s.u = RadialField(RadialGrid::from_nodes(std::move(nodes)), std::move(vals));

    // Annulus nodes: the discrete operator with the actual coefficients.
    auto geo = make_geometry(problem.M, annulus.alpha.grid());
    const auto a = sample(problem.a, ag);
    const auto b = sample(problem.b, ag);
    const auto La = RadialOperator(geo, a).apply(annulus.alpha.values());
    double worst = interior.pointwise_min;
    for (std::size_t i = ag.first_unknown(); i <= ag.last_unknown(); ++i)
        worst = std::min(worst, La[i] - b[i] * std::pow(annulus.alpha[i], problem.sigma));
    s.pointwise_min = worst;
    if (worst < -tol * std::max(1.0, interior.beta[0]))
        throw HypothesisError("glued profile violates the differential inequality by " + format_double(-worst));
    return s;
}

GlobalSubsolution build_subsolution(const LogisticProblem& problem, double R, double T_o, int n,
                                    std::optional<double> outer_radius) {
    const auto cond = existence_condition(problem.M, problem.a, R, T_o);
    if (!cond.certified()) throw HypothesisError("existence condition fails:\n" + cond.to_text());
    const auto interior = interior_subsolution(problem, R, T_o, 1.0, std::nullopt, n);
    const RadialFunction a_minus = [&](double r) { return std::max(0.0, -problem.a(r)); };
    const auto annulus = annulus_subsolution(problem.M, a_minus, problem.b, problem.sigma, R, T_o,
                                             interior.alpha0, interior.eps, n);
    return glue_subsolution(problem, interior, annulus, outer_radius);
}

double weak_pairing(const LogisticProblem& problem, const GlobalSubsolution& s, double r_lo,
                    double r_peak, double r_hi) {
    if (!(r_lo > 0.0 && r_lo < r_peak && r_peak < r_hi))
        throw DomainError("test hat needs 0 < r_lo < r_peak < r_hi");
    const auto& M = problem.M;
    const double R = s.interior.R, end = s.annulus.R + s.annulus.T;
    std::vector<double> cuts{r_lo, r_peak, r_hi};
    for (double c : {R, end})
        if (c > r_lo && c < r_hi) cuts.push_back(c);
    for (double r : s.annulus.alpha.grid()->nodes())
        if (r > r_lo && r < r_hi) cuts.push_back(r);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto phi = [&](double r) { return r <= r_peak ? (r - r_lo) / (r_peak - r_lo) : (r_hi - r) / (r_hi - r_peak); };
    auto dphi = [&](double r) { return r <= r_peak ? 1.0 / (r_peak - r_lo) : -1.0 / (r_hi - r_peak); };
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double lo = cuts[k], hi = cuts[k + 1];
        const int pieces = hi <= R ? 32 : 1;
        for (int j = 0; j < pieces; ++j) {
            const double x0 = lo + (hi - lo) * j / pieces, x1 = lo + (hi - lo) * (j + 1) / pieces;
            const double xm = 0.5 * (x0 + x1);
            const double du = s.derivative(xm), dp = dphi(xm);
            auto f = [&](double r) {
                const double u = s.value(r);
                return M.omega() * M.density(r) *
                       (-du * dp + problem.a(r) * u * phi(r) - problem.b(r) * std::pow(u, problem.sigma) * phi(r));
            };
            // u' is linear inside B_R, so take it pointwise there.
            auto f_ball = [&](double r) {
                const double u = s.value(r);
                return M.omega() * M.density(r) *
                       (-s.derivative(r) * dp + problem.a(r) * u * phi(r) - problem.b(r) * std::pow(u, problem.sigma) * phi(r));
            };
            total += hi <= R ? gauss<double, 7>::integrate(f_ball, x0, x1) : gauss<double, 7>::integrate(f, x0, x1);
        }
    }
    return total;
}

}  // namespace logman
