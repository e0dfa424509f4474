#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "logman/certificate.hpp"
#include "logman/radial_ode.hpp"

namespace logman {

struct MonotoneOptions {
    double increment_tol = 1e-10;  ///< node-wise |u_{k+1}-u_k| <= tol * max(1, |u|)
    double residual_tol = 1e-9;    ///< or sup |Delta u + a u - b u^sigma| below this
    int max_sweeps = 10000;
    double shift_factor = 1.1;
    bool ascending = true;         ///< also iterate up from the sub-solution
};

struct SolverReport {
    RadialField solution;          ///< descending limit (maximal in the bracket)
    RadialField ascending;         ///< ascending limit, when computed
    double residual = 0.0;         ///< sup over unknowns of |Delta u + a u - b u^sigma|
    double relative_residual = 0.0;
    int sweeps_descending = 0;
    int sweeps_ascending = 0;
    /// Per-sweep worst violation of monotonicity (relative to max(1,|u|)).
    std::vector<double> ledger_descending, ledger_ascending;
    double max_violation = 0.0;
    /// max(ascending - descending)_+ ; zero up to tolerance.
    double bracket_gap = 0.0;
    bool converged = false;
    /// Blow-up / exhaustion: the outer limit (n -> inf or R -> inf) settled.
    bool limit_converged = false;
    double cauchy_increment = 0.0;
    std::vector<double> schedule;       ///< boundary values n or radii R
    std::vector<double> center_values;  ///< u(0) at each schedule entry
    std::vector<std::string> notes;
};

/// Discrete two-point problem Delta_h u + a u - b u^sigma = 0 on a grid with
/// Dirichlet data; shared by the ball solver and the annulus construction.
struct BracketProblem {
    GeometryPtr geo;
    std::vector<double> a, b;
    double sigma = 2.0;
    double inner_value = 0.0;  ///< ignored on balls
    double outer_value = 0.0;
};

/// Monotone iteration u <- (Delta_h - c)^{-1}(-(c u + a u - b u^sigma)),
/// descending from super and (optionally) ascending from sub. The shift is
/// per node: c = shift_factor * max(0, sigma b w^{sigma-1} - a) with w the
/// current iterate (descending) or the super-solution (ascending), which
/// keeps the map order-preserving on the bracket.
SolverReport monotone_iteration(const BracketProblem& p, std::span<const double> sub,
                                std::span<const double> super, const MonotoneOptions& opt = {});

/// Ball problem with boundary value n, bracketed by u_sub <= u_super.
SolverReport solve_bvp_monotone(const LogisticProblem& problem, double R, double n,
                                const RadialField& u_sub, const RadialField& u_super,
                                const MonotoneOptions& opt = {});

/// Constant max(n, sup (a_+/b)^{1/(sigma-1)} + 1), a super-solution when b > 0.
double default_super_value(const LogisticProblem& problem, const RadialGrid& grid, double n);

struct BlowupOptions {
    int mesh = 2000;
    double tol = 1e-6;        ///< relative change on B_{R/2}
    MonotoneOptions monotone = {.ascending = false};
};

/// Boundary values n_j = 4^j, j = 0..30.
std::vector<double> default_n_schedule();

/// Solves with boundary data n over the schedule on one grid, checks the
/// family is non-decreasing in n and stops once interior values settle.
/// The radius overload uses a grid with a boundary layer at R.
SolverReport blowup_solution(const LogisticProblem& problem, double R,
                             std::span<const double> n_schedule, const BlowupOptions& opt = {});
SolverReport blowup_solution(const LogisticProblem& problem, const GeometryPtr& geo,
                             std::span<const double> n_schedule, const BlowupOptions& opt = {});

/// Boundary blow-up limits over an increasing radius schedule (nested grids
/// with boundary layers), checked to decrease in R; returns the last one
/// restricted to the smallest ball. If u_minus is given it must lie below
/// the limit.
SolverReport maximal_solution(const LogisticProblem& problem, std::span<const double> R_schedule,
                              const RadialField* u_minus = nullptr, const BlowupOptions& opt = {},
                              std::span<const double> n_schedule = {});

struct ComparisonResult {
    bool ordered = false;         ///< u <= v + tol at every node
    double max_violation = 0.0;   ///< max (u - v)_+
    double u_residual = 0.0;      ///< sup |Delta u + a u - b u^sigma|
    double v_defect = 0.0;        ///< sup (Delta v + a v - b v^sigma)_+
};

/// Comparison principle check on a common grid. Throws HypothesisError when
/// u(R) > v(R), u is not a solution or v not a super-solution (to tol).
ComparisonResult comparison_check(const LogisticProblem& problem, const RadialField& u,
                                  const RadialField& v, double R, double tol = 1e-6);

/// Hypotheses of the uniqueness theorem: b >= C (1+r)^{-mu}, sup a_-/b < inf,
/// liminf log vol B_r / r^{2-mu} < inf; with two solutions also the
/// liminf/limsup sandwich over the tail of their grids.
CertificateReport uniqueness_conditions(const LogisticProblem& problem, double mu, RadiusRange range,
                                        const RadialField* u = nullptr, const RadialField* v = nullptr);

}  // namespace logman
