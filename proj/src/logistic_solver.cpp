#include "logman/logistic_solver.hpp"

#include <algorithm>
#include <cmath>

#include "logman/error.hpp"
#include "logman/fitting.hpp"
#include "logman/parallel.hpp"

namespace logman {

namespace {

double ppow(double x, double s) { return std::pow(std::max(x, 0.0), s); }

struct ResidualInfo {
    double abs = 0.0, rel = 0.0;
};

ResidualInfo residual_of(const BracketProblem& p, const RadialOperator& op_a, std::span<const double> u) {
    const auto& grid = *p.geo->grid();
    const auto lap_a = op_a.apply(u);
    ResidualInfo r;
    for (std::size_t i = grid.first_unknown(); i <= grid.last_unknown(); ++i) {
        const double reaction = p.b[i] * ppow(u[i], p.sigma);
        const double res = lap_a[i] - reaction;
        const double scale = std::max(1.0, std::abs(lap_a[i] - p.a[i] * u[i]) +
                                               std::abs(p.a[i] * u[i]) + std::abs(reaction));
        r.abs = std::max(r.abs, std::abs(res));
        r.rel = std::max(r.rel, std::abs(res) / scale);
    }
    return r;
}

void set_boundary(const BracketProblem& p, std::vector<double>& u) {
    if (!p.geo->grid()->has_pole()) u.front() = p.inner_value;
    u.back() = p.outer_value;
}

// One direction of the monotone scheme. direction = -1 descends, +1 ascends.
std::vector<double> iterate(const BracketProblem& p, std::vector<double> u,
                            std::span<const double> super, int direction, const MonotoneOptions& opt,
                            const RadialOperator& op_a, std::vector<double>& ledger, int& sweeps,
                            bool& converged) {
    const std::size_t n = u.size();
    std::vector<double> c(n), rhs(n);
    set_boundary(p, u);
    converged = false;
    for (int sweep = 1; sweep <= opt.max_sweeps; ++sweep) {
        for (std::size_t i = 0; i < n; ++i) {
            const double w = direction < 0 ? u[i] : super[i];
            c[i] = opt.shift_factor * std::max(0.0, p.sigma * p.b[i] * ppow(w, p.sigma - 1.0) - p.a[i]);
            rhs[i] = -(c[i] * u[i] + p.a[i] * u[i] - p.b[i] * ppow(u[i], p.sigma));
        }
        std::vector<double> negc(n);
        for (std::size_t i = 0; i < n; ++i) negc[i] = -c[i];
        RadialOperator op(p.geo, std::move(negc));
        auto next = solve_dirichlet(op, rhs, p.inner_value, p.outer_value);

        double violation = 0.0, increment = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = next[i] - u[i];
            const double scale = std::max(1.0, std::abs(u[i]));
            violation = std::max(violation, std::max(0.0, direction < 0 ? d : -d) / scale);
            increment = std::max(increment, std::abs(d) / std::max(1.0, std::abs(next[i])));
        }
        ledger.push_back(violation);
        u = std::move(next);
        sweeps = sweep;
        if (increment <= opt.increment_tol || residual_of(p, op_a, u).abs < opt.residual_tol) {
            converged = true;
            return u;
        }
    }
    throw NumericalError("monotone iteration did not converge in " + std::to_string(opt.max_sweeps) +
                             " sweeps",
                         u);
}

}  // namespace

SolverReport monotone_iteration(const BracketProblem& p, std::span<const double> sub,
                                std::span<const double> super, const MonotoneOptions& opt) {
    const auto& grid = p.geo->grid();
    const std::size_t n = grid->size();
    if (sub.size() != n || super.size() != n || p.a.size() != n || p.b.size() != n)
        throw DomainError("bracket problem sizes do not match the grid");
    for (std::size_t i = 0; i < n; ++i) {
        if (p.b[i] < 0.0) throw HypothesisError("monotone iteration needs b >= 0");
        if (sub[i] > super[i] + 1e-12 * std::max(1.0, std::abs(super[i])))
            throw HypothesisError("bracket violated: u_sub > u_super at r = " +
                                  format_double(grid->node(i)));
    }
    auto within = [&](std::size_t i, double v) {
        const double slack = 1e-12 * std::max(1.0, std::abs(v));
        return sub[i] <= v + slack && v <= super[i] + slack;
    };
    if (!within(n - 1, p.outer_value) || (!grid->has_pole() && !within(0, p.inner_value)))
        throw HypothesisError("boundary data outside the bracket [u_sub, u_super]");

    const RadialOperator op_a(p.geo, p.a);
    SolverReport rep;
    bool ok_down = false, ok_up = true;
    auto down = iterate(p, {super.begin(), super.end()}, super, -1, opt, op_a, rep.ledger_descending,
                        rep.sweeps_descending, ok_down);
    rep.solution = RadialField(grid, down);
    if (opt.ascending) {
        auto up = iterate(p, {sub.begin(), sub.end()}, super, +1, opt, op_a, rep.ledger_ascending,
                          rep.sweeps_ascending, ok_up);
        for (std::size_t i = 0; i < n; ++i)
            rep.bracket_gap = std::max(rep.bracket_gap, (up[i] - down[i]) / std::max(1.0, std::abs(down[i])));
        rep.ascending = RadialField(grid, std::move(up));
    }
    for (double v : rep.ledger_descending) rep.max_violation = std::max(rep.max_violation, v);
    for (double v : rep.ledger_ascending) rep.max_violation = std::max(rep.max_violation, v);
    const auto res = residual_of(p, op_a, down);
    rep.residual = res.abs;
    rep.relative_residual = res.rel;
    rep.converged = ok_down && ok_up;
    return rep;
}

double default_super_value(const LogisticProblem& problem, const RadialGrid& grid, double n) {
    const auto a = sample(problem.a, grid);
    const auto b = sample(problem.b, grid);
    double top = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(b[i] > 0.0)) throw HypothesisError("b must be strictly positive on the grid");
        top = std::max(top, std::pow(std::max(a[i], 0.0) / b[i], 1.0 / (problem.sigma - 1.0)));
    }
    return std::max(n, top + 1.0);
}

namespace {

BracketProblem ball_problem(const LogisticProblem& problem, const GeometryPtr& geo, double n) {
    BracketProblem p;
    p.geo = geo;
    p.a = sample(problem.a, *geo->grid());
    p.b = sample(problem.b, *geo->grid());
    for (double v : p.b)
        if (!(v > 0.0)) throw HypothesisError("b must be strictly positive on the grid");
    p.sigma = problem.sigma;
    p.outer_value = n;
    return p;
}

}  // namespace

SolverReport solve_bvp_monotone(const LogisticProblem& problem, double R, double n,
                                const RadialField& u_sub, const RadialField& u_super,
                                const MonotoneOptions& opt) {
    const auto& grid = u_super.grid();
    if (u_sub.grid()->nodes() != grid->nodes()) throw DomainError("u_sub and u_super live on different grids");
    if (!grid->has_pole()) throw DomainError("ball problem needs a grid with a pole");
    if (std::abs(grid->outer() - R) > 1e-12 * R) throw DomainError("grid radius does not match R");
    auto p = ball_problem(problem, make_geometry(problem.M, grid), n);
    return monotone_iteration(p, u_sub.values(), u_super.values(), opt);
}

std::vector<double> default_n_schedule() {
    std::vector<double> s;
    double n = 1.0;
    for (int j = 0; j <= 30; ++j, n *= 4.0) s.push_back(n);
    return s;
}

SolverReport blowup_solution(const LogisticProblem& problem, double R, std::span<const double> n_schedule,
                             const BlowupOptions& opt) {
    return blowup_solution(problem, make_geometry(problem.M, RadialGrid::ball_layered(R, opt.mesh)),
                           n_schedule, opt);
}

SolverReport blowup_solution(const LogisticProblem& problem, const GeometryPtr& geo,
                             std::span<const double> n_schedule, const BlowupOptions& opt) {
    if (n_schedule.empty()) throw DomainError("empty boundary-value schedule");
    for (std::size_t j = 1; j < n_schedule.size(); ++j)
        if (!(n_schedule[j] > n_schedule[j - 1])) throw DomainError("boundary-value schedule must increase");
    if (!(n_schedule.front() >= 0.0)) throw DomainError("boundary values must be non-negative");

    const auto& grid = *geo->grid();
    const double R = grid.outer();
    const std::size_t half = grid.locate(0.5 * R);
    std::vector<double> prev(grid.size(), 0.0);
    SolverReport out;
    for (std::size_t j = 0; j < n_schedule.size(); ++j) {
        const double n = n_schedule[j];
        auto p = ball_problem(problem, geo, n);
        const std::vector<double> super(grid.size(), default_super_value(problem, grid, n));
        auto rep = monotone_iteration(p, prev, super, opt.monotone);
        const auto& u = rep.solution.values();

        double violation = 0.0, change = 0.0, size = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            violation = std::max(violation, (prev[i] - u[i]) / std::max(1.0, std::abs(u[i])));
        for (std::size_t i = 0; i <= half; ++i) {
            change = std::max(change, std::abs(u[i] - prev[i]));
            size = std::max(size, std::abs(u[i]));
        }
        out.max_violation = std::max({out.max_violation, violation, rep.max_violation});
        if (violation > 1e-6)
            throw NumericalError("blow-up family decreases in n by " + format_double(violation), u);
        out.schedule.push_back(n);
        out.center_values.push_back(u[0]);
        out.ledger_descending.insert(out.ledger_descending.end(), rep.ledger_descending.begin(),
                                     rep.ledger_descending.end());
        out.sweeps_descending += rep.sweeps_descending;
        out.solution = rep.solution;
        out.residual = rep.residual;
        out.relative_residual = rep.relative_residual;
        out.converged = rep.converged;
        out.cauchy_increment = size > 0.0 ? change / size : change;
        prev = u;
        if (j > 0 && out.cauchy_increment < opt.tol) {
            out.limit_converged = true;
            break;
        }
    }
    if (!out.limit_converged)
        out.notes.push_back("interior values still changing at the end of the n schedule (relative increment " +
                            format_double(out.cauchy_increment) + ")");
    return out;
}

SolverReport maximal_solution(const LogisticProblem& problem, std::span<const double> R_schedule,
                              const RadialField* u_minus, const BlowupOptions& opt,
                              std::span<const double> n_schedule) {
    if (R_schedule.size() < 2) throw DomainError("exhaustion needs at least two radii");
    const auto grids = RadialGrid::nested_layered_balls(R_schedule, opt.mesh);
    const auto ns = n_schedule.empty() ? default_n_schedule()
                                       : std::vector<double>(n_schedule.begin(), n_schedule.end());
    if (u_minus) {
        const auto& um = u_minus->values();
        double support = 0.0;
        for (std::size_t i = 0; i < um.size(); ++i)
            if (um[i] > 0.0) support = u_minus->r(i);
        if (support > R_schedule.front())
            throw DomainError("sub-solution support exceeds the smallest radius");
    }

    auto limits = parallel_map(grids.size(), [&](std::size_t k) {
        return blowup_solution(problem, make_geometry(problem.M, grids[k]), ns, opt);
    });

    SolverReport out;
    out.schedule.assign(R_schedule.begin(), R_schedule.end());
    for (std::size_t k = 0; k < limits.size(); ++k) {
        out.center_values.push_back(limits[k].solution[0]);
        out.max_violation = std::max(out.max_violation, limits[k].max_violation);
        out.sweeps_descending += limits[k].sweeps_descending;
        if (!limits[k].limit_converged)
            out.notes.push_back("R = " + format_double(R_schedule[k]) + ": " + limits[k].notes.back());
    }
    for (std::size_t k = 0; k + 1 < limits.size(); ++k) {
        const auto& small = limits[k].solution;
        const auto& big = limits[k + 1].solution;
        double violation = 0.0;
        for (std::size_t i = 0; i < small.size(); ++i)
            violation = std::max(violation, (big.value_at(small.r(i)) - small[i]) / std::max(1.0, std::abs(small[i])));
        out.max_violation = std::max(out.max_violation, violation);
        if (violation > 1e-6)
            throw NumericalError("exhaustion family increases in R by " + format_double(violation),
                                 big.values());
    }

    // The last limit restricted to the uniform nodes of the smallest ball,
    // a prefix of its own grid.
    const auto& last = limits.back().solution;
    const double R0 = R_schedule.front();
    std::size_t n0 = 0;
    while (n0 < last.size() && last.r(n0) <= R0 * (1 + 1e-12)) ++n0;
    std::vector<double> nodes(last.grid()->nodes().begin(), last.grid()->nodes().begin() + n0);
    out.solution = RadialField(RadialGrid::from_nodes(std::move(nodes)),
                               std::vector<double>(last.values().begin(), last.values().begin() + n0));
    out.residual = residual(problem, out.solution);
    out.converged = std::all_of(limits.begin(), limits.end(), [](const auto& r) { return r.converged; });

    double top = 0.0, change = 0.0;
    const auto& before = limits[limits.size() - 2].solution;
    // Compared on B_{R0/2}, away from the boundary layer of the smaller ball.
    for (std::size_t i = 0; i + 1 < n0 && last.r(i) <= 0.5 * R0; ++i) {
        top = std::max(top, std::abs(last[i]));
        change = std::max(change, std::abs(last[i] - before.value_at(last.r(i))));
    }
    out.cauchy_increment = change;
    out.limit_converged = change <= 1e-6 * std::max(1.0, top);

    if (u_minus) {
        double worst = 0.0, um_top = 0.0;
        for (std::size_t i = 0; i < n0; ++i) {
            const double r = out.solution.r(i);
            const double um = r <= u_minus->grid()->outer() ? u_minus->value_at(r) : 0.0;
            um_top = std::max(um_top, um);
            worst = std::max(worst, um - out.solution[i] - 1e-8 * std::max(1.0, um));
        }
        if (um_top > 0.0 && top < 1e-12)
            throw NumericalError("maximal solution is indistinguishable from 0 above a positive sub-solution",
                                 out.solution.values());
        if (worst > 0.0)
            throw NumericalError("maximal solution lies below the sub-solution by " + format_double(worst),
                                 out.solution.values());
        out.notes.push_back("limit >= u_minus verified at " + std::to_string(n0) + " nodes");
    }
    return out;
}

ComparisonResult comparison_check(const LogisticProblem& problem, const RadialField& u, const RadialField& v,
                                  double R, double tol) {
    if (u.grid()->nodes() != v.grid()->nodes()) throw DomainError("u and v live on different grids");
    const auto& grid = u.grid();
    if (std::abs(grid->outer() - R) > 1e-12 * R) throw DomainError("grid radius does not match R");
    ComparisonResult out;
    if (u[u.size() - 1] > v[v.size() - 1] + tol)
        throw HypothesisError("comparison precondition fails: u(R) > v(R)");
    auto geo = make_geometry(problem.M, grid);
    const auto ru = residual_field(problem, geo, u.values());
    const auto rv = residual_field(problem, geo, v.values());
    for (std::size_t i = grid->first_unknown(); i <= grid->last_unknown(); ++i) {
        out.u_residual = std::max(out.u_residual, std::abs(ru[i]) / std::max(1.0, std::abs(u[i])));
        out.v_defect = std::max(out.v_defect, std::max(0.0, rv[i]) / std::max(1.0, std::abs(v[i])));
    }
    if (out.u_residual > tol) throw HypothesisError("comparison precondition fails: u is not a solution");
    if (out.v_defect > tol) throw HypothesisError("comparison precondition fails: v is not a super-solution");
    for (std::size_t i = 0; i < u.size(); ++i)
        out.max_violation = std::max(out.max_violation, u[i] - v[i]);
    out.ordered = out.max_violation <= tol;
    return out;
}

namespace {

std::vector<double> geometric_points(double lo, double hi, int count) {
    std::vector<double> r(count);
    for (int i = 0; i < count; ++i) r[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
    return r;
}

}  // namespace

CertificateReport uniqueness_conditions(const LogisticProblem& problem, double mu, RadiusRange range,
                                        const RadialField* u, const RadialField* v) {
    if (!(mu >= 0.0 && mu < 2.0)) throw DomainError("uniqueness conditions need 0 <= mu < 2");
    if (!(range.lo > 1.0) || !(range.hi >= 10.0 * range.lo))
        throw DomainError("radius range must lie in r > 1 and span a decade");
    CertificateReport rep("uniqueness of positive solutions", "positive solutions with 0 < liminf u <= limsup u < inf are unique");

    // b >= C (1+r)^{-mu}
    double C = INFINITY;
    for (int i = 0; i <= 4000; ++i) {
        const double r = range.hi * i / 4000.0;
        C = std::min(C, problem.b(r) * std::pow(1.0 + r, mu));
    }
    const auto pts = geometric_points(range.lo, range.hi, 64);
    std::vector<double> lx, lb;
    for (double r : pts) {
        const double b = problem.b(r);
        if (b > 0.0) {
            lx.push_back(std::log(r));
            lb.push_back(std::log(b));
        }
    }
    const auto bf = fit_line(lx, lb);
    const double decay = bf.degenerate ? INFINITY : -bf.slope;
    rep.add("b lower estimate: decay exponent of b <= mu", decay, mu,
            C > 0.0 && decay <= mu + 0.05 ? Verdict::holds : Verdict::fails,
            "C = min b (1+r)^mu = " + format_double(C));

    // sup a_- / b < inf
    double sup = 0.0;
    std::vector<double> qx, qy;
    for (int i = 0; i <= 4000; ++i) {
        const double r = range.hi * i / 4000.0;
        sup = std::max(sup, std::max(0.0, -problem.a(r)) / problem.b(r));
    }
    for (double r : pts) {
        const double q = std::max(0.0, -problem.a(r)) / problem.b(r);
        if (q > 0.0) {
            qx.push_back(std::log(r));
            qy.push_back(std::log(q));
        }
    }
    const auto qf = fit_line(qx, qy);
    const double qgrowth = qx.size() < 2 || qf.degenerate ? 0.0 : qf.slope;
    rep.add("sup a_-/b < inf (growth exponent of a_-/b)", qgrowth, 0.0,
            qgrowth <= 0.05 ? Verdict::holds : Verdict::fails, "grid sup = " + format_double(sup));

    // liminf log vol B_r / r^{2-mu} < inf
    const auto g = classify_log_volume_growth(problem.M, 2.0 - mu, range);
    rep.add("volume growth: order of log vol B_r <= 2 - mu", g.fitted_exponent, 2.0 - mu, g.verdict,
            "exponential rate " + format_double(g.exponential_rate));

    auto sandwich = [&](const RadialField& w, const std::string& name) {
        const auto& grid = *w.grid();
        const double start = std::min(range.lo, 0.5 * grid.outer());
        double lo = INFINITY, hi = 0.0;
        for (std::size_t i = grid.locate(start); i < grid.size(); ++i) {
            lo = std::min(lo, w[i]);
            hi = std::max(hi, w[i]);
        }
        rep.add(name + ": 0 < liminf <= limsup < inf", lo, hi, lo > 1e-12 && std::isfinite(hi),
                "tail r >= " + format_double(start));
    };
    if (u) sandwich(*u, "u");
    if (v) sandwich(*v, "v");
    if (u && v && u->grid()->nodes() == v->grid()->nodes()) {
        double diff = 0.0;
        for (std::size_t i = 0; i < u->size(); ++i) diff = std::max(diff, std::abs((*u)[i] - (*v)[i]));
        rep.note("max |u - v| = " + format_double(diff));
    }
    return rep;
}

}  // namespace logman
