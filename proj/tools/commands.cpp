#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "expression.hpp"
#include "logman/error.hpp"
#include "logman/logistic_solver.hpp"
#include "logman/nonexistence.hpp"
#include "logman/parallel.hpp"
#include "logman/poisson_green.hpp"
#include "logman/spectrum.hpp"
#include "logman/subsolution.hpp"

namespace logman::cli {

namespace {

std::string fd(double x) { return format_double(x); }

std::string field_csv(const RadialField& u) {
    std::string out = "r,value\n";
    for (std::size_t i = 0; i < u.size(); ++i) out += fd(u.r(i)) + "," + fd(u[i]) + "\n";
    return out;
}

std::string list(const std::vector<double>& v) {
    std::string out;
    for (double x : v) out += (out.empty() ? "" : " ") + fd(x);
    return out;
}

class Report {
public:
    Report& kv(const std::string& key, const std::string& value) {
        text_ += key + ": " + value + "\n";
        return *this;
    }
    Report& kv(const std::string& key, double value) { return kv(key, fd(value)); }
    Report& raw(const std::string& text) {
        text_ += text;
        return *this;
    }
    const std::string& str() const { return text_; }

private:
    std::string text_;
};

struct Context {
    const Scenario& s;
    Model model;
    Report rep;
    RunResult out;

    LogisticProblem problem() const { return {model.M, model.a, model.b, s.sigma}; }

    SpectralOptions spectral() const {
        SpectralOptions o;
        o.n = s.solver.mesh;
        return o;
    }
    BlowupOptions blowup() const {
        BlowupOptions o;
        o.mesh = s.solver.mesh;
        o.tol = s.solver.tol;
        return o;
    }
    std::vector<double> schedule() const {
        if (!s.solver.R_schedule.empty()) return s.solver.R_schedule;
        const double R = s.solver.R_max;
        if (!(R > 0.0)) throw ConfigError("solver.R_schedule or solver.R_max is required for " + s.command);
        return {R / 8, R / 4, R / 2, R};
    }
    NonexistenceOptions nonexist() const {
        NonexistenceOptions o;
        o.range = {s.solver.range_lo, s.solver.range_hi};
        if (!s.solver.R_schedule.empty()) o.spectral_schedule = s.solver.R_schedule;
        o.spectral.n = s.solver.mesh;
        return o;
    }
    void certificate(const CertificateReport& c) {
        rep.raw(c.to_text());
        out.headline.verdict = c.certified() ? 1 : 0;
        if (!c.certified()) out.exit_code = exit_hypothesis;
    }
    void file(const std::string& name, std::string content) { out.files.emplace_back(name, std::move(content)); }
};

void cmd_eigen(Context& c) {
    const auto& v = c.s.solver;
    const auto res = v.eigen == "principal" ? principal_eigenvalue(c.model.M, c.model.a, v.R, c.spectral())
                                            : dirichlet_bottom(c.model.M, c.model.a, v.mu, v.R, c.spectral());
    c.rep.kv("problem", v.eigen == "principal" ? "Delta phi + lambda a phi = 0 on B_R"
                                               : "-(Delta + mu a) phi = lambda phi on B_R")
        .kv("R", v.R)
        .kv("mesh", std::to_string(v.mesh))
        .kv("eigenvalue", res.eigenvalue)
        .kv("iterations", std::to_string(res.iterations));
    if (v.eigen != "principal") c.rep.kv("mu", v.mu);
    c.out.headline.eigenvalue = res.eigenvalue;
    c.file("eigenfunction.csv", field_csv(res.eigenfunction));
}

void cmd_lambda_star(Context& c) {
    const auto sched = c.schedule();
    const auto res = lambda_star(c.model.M, c.model.a, sched, c.spectral());
    const int m = c.model.M.dimension();
    const bool hardy = c.s.has("params.k") && m > 2;
    const double lower = hardy ? (m - 2.0) * (m - 2.0) / (4.0 * c.s.k) : 0.0;

    std::string csv = hardy ? "R,lambda_1,upper_bound,lower_bound\n" : "R,lambda_1,upper_bound\n";
    for (std::size_t i = 0; i < res.radii.size(); ++i) {
        csv += fd(res.radii[i]) + "," + fd(res.sequence[i]) + "," + fd(res.upper_bound);
        csv += hardy ? "," + fd(lower) + "\n" : "\n";
    }
    c.file("lambda_star.csv", csv);
    c.rep.kv("radii", list(res.radii))
        .kv("lambda_1", list(res.sequence))
        .kv("lambda_* upper bound", res.upper_bound)
        .kv("lambda_* extrapolated", res.extrapolated)
        .kv("monotone", res.monotone ? "yes" : "no")
        .kv("max increase", res.max_increase);
    c.out.headline.eigenvalue = res.upper_bound;

    if (hardy) {
        CertificateReport cert("lower bound for a <= k/r^2", "lambda_* >= (m-2)^2/(4k)");
        for (std::size_t i = 0; i < res.radii.size(); ++i)
            cert.add("lambda_1(" + fd(res.radii[i]) + ") >= (m-2)^2/(4k)", res.sequence[i], lower,
                     res.sequence[i] >= lower - 1e-3, "tolerance 1e-3");
        c.certificate(cert);
    }
}

void cmd_duality(Context& c) {
    if (c.s.solver.mu_grid.size() < 2) throw ConfigError("solver.mu_grid needs at least two values");
    const auto sched = c.schedule();
    c.rep.kv("radii", list(sched)).kv("mu grid", list(c.s.solver.mu_grid));
    c.certificate(duality_check(c.model.M, c.model.a, sched, c.s.solver.mu_grid, c.spectral()));
}

MonotoneOptions monotone(const Scenario& s) {
    MonotoneOptions o;
    o.residual_tol = std::min(o.residual_tol, s.solver.tol);
    return o;
}

void cmd_solve(Context& c) {
    const auto& v = c.s.solver;
    const auto P = c.problem();
    auto grid = RadialGrid::ball(v.R, v.mesh);
    const double top = c.s.has("solver.super") ? v.super : default_super_value(P, *grid, v.boundary);
    const auto res = solve_bvp_monotone(P, v.R, v.boundary, RadialField::constant(grid, v.sub),
                                        RadialField::constant(grid, top), monotone(c.s));
    c.rep.kv("R", v.R)
        .kv("boundary value", v.boundary)
        .kv("sub-solution", v.sub)
        .kv("super-solution", top)
        .kv("sweeps descending", std::to_string(res.sweeps_descending))
        .kv("sweeps ascending", std::to_string(res.sweeps_ascending))
        .kv("residual", res.residual)
        .kv("bracket gap", res.bracket_gap)
        .kv("max monotonicity violation", res.max_violation)
        .kv("u(0)", res.solution[0]);
    c.out.headline.residual = res.residual;
    c.out.headline.center = res.solution[0];
    c.file("solution.csv", field_csv(res.solution));
    if (!res.ascending.values().empty()) c.file("solution_ascending.csv", field_csv(res.ascending));
}

void cmd_blowup(Context& c) {
    const auto& v = c.s.solver;
    const auto ns = default_n_schedule();
    const auto res = blowup_solution(c.problem(), v.R, ns, c.blowup());
    std::string csv = "n,center\n";
    for (std::size_t i = 0; i < res.center_values.size(); ++i)
        csv += fd(res.schedule[i]) + "," + fd(res.center_values[i]) + "\n";
    c.rep.kv("R", v.R)
        .kv("boundary values used", std::to_string(res.center_values.size()))
        .kv("limit converged", res.limit_converged ? "yes" : "no")
        .kv("cauchy increment", res.cauchy_increment)
        .kv("residual", res.residual)
        .kv("u(0)", res.solution[0]);
    for (const auto& n : res.notes) c.rep.kv("note", n);
    c.out.headline.residual = res.residual;
    c.out.headline.center = res.solution[0];
    c.file("blowup.csv", field_csv(res.solution));
    c.file("blowup_centers.csv", csv);
}

void report_maximal(Context& c, const SolverReport& res) {
    std::string csv = "R,center\n";
    for (std::size_t i = 0; i < res.center_values.size(); ++i)
        csv += fd(res.schedule[i]) + "," + fd(res.center_values[i]) + "\n";
    c.rep.kv("exhaustion radii", list(res.schedule))
        .kv("blow-up limits at the center", list(res.center_values))
        .kv("limit converged", res.limit_converged ? "yes" : "no")
        .kv("cauchy increment", res.cauchy_increment)
        .kv("max monotonicity violation", res.max_violation)
        .kv("residual", res.residual)
        .kv("u(0)", res.solution[0]);
    for (const auto& n : res.notes) c.rep.kv("note", n);
    c.out.headline.residual = res.residual;
    c.out.headline.center = res.solution[0];
    c.file("maximal.csv", field_csv(res.solution));
    c.file("maximal_centers.csv", csv);
}

void cmd_maximal(Context& c) { report_maximal(c, maximal_solution(c.problem(), c.schedule(), nullptr, c.blowup())); }

// Builds u_- at R and, when a schedule is configured, the maximal solution above it.
void subsolution_pipeline(Context& c, double R) {
    const auto& v = c.s.solver;
    const auto P = c.problem();
    const double outer = v.outer > 0.0 ? v.outer : R + 2.0 * v.T_o;
    const auto g = build_subsolution(P, R, v.T_o, v.mesh, outer);
    const auto& in = g.interior;
    const auto& an = g.annulus;

    double weak = HUGE_VAL;
    for (int k = 1; k < 40; ++k) {
        const double r1 = (R + v.T_o) * k / 40.0, h = 0.5 * (R + v.T_o) / 40.0;
        weak = std::min(weak, weak_pairing(P, g, r1 - h, r1, r1 + h));
    }
    c.rep.kv("R", R)
        .kv("T_o", v.T_o)
        .kv("alpha0", in.alpha0)
        .kv("halvings", std::to_string(in.halvings))
        .kv("eps", in.eps)
        .kv("eta window", "[" + fd(in.eta_min) + ", " + fd(in.eta_max) + "]")
        .kv("eta", in.eta)
        .kv("tau", in.tau)
        .kv("beta(0)", in.beta[0])
        .kv("alpha'(R)", an.derivative_R)
        .kv("derivative bound |alpha'(R)| <= rhs", fd(an.bound_lhs) + " <= " + fd(an.bound_rhs))
        .kv("kink at R", g.kink_inner)
        .kv("kink at R+T_o", g.kink_outer)
        .kv("pointwise min of Delta u + a u - b u^sigma", g.pointwise_min)
        .kv("min weak pairing over hat functions", weak);
    c.out.headline.center = g.u[0];
    c.file("interior.csv", field_csv(in.beta));
    c.file("annulus.csv", field_csv(an.alpha));
    c.file("subsolution.csv", field_csv(g.u));
    if (weak < -1e-6) throw HypothesisError("u_- fails the weak sub-solution test: " + fd(weak));

    if (!v.R_schedule.empty() || v.R_max > 0.0) {
        auto sched = c.schedule();
        const auto res = maximal_solution(P, sched, &g.u, c.blowup());
        double gap = HUGE_VAL;
        for (std::size_t i = 0; i < g.u.size() && g.u.r(i) <= res.solution.grid()->outer(); ++i)
            gap = std::min(gap, res.solution.value_at(g.u.r(i)) - g.u[i]);
        c.rep.kv("min (u_max - u_-)", gap);
        report_maximal(c, res);
        if (gap < -1e-9) throw NumericalError("maximal solution falls below u_-");
    }
}

void cmd_subsolution(Context& c) {
    const auto cond = existence_condition(c.model.M, c.model.a, c.s.solver.R, c.s.solver.T_o);
    c.rep.raw(cond.to_text());
    c.out.headline.verdict = cond.certified() ? 1 : 0;
    if (!cond.certified()) {
        c.out.exit_code = exit_hypothesis;
        return;
    }
    subsolution_pipeline(c, c.s.solver.R);
}

void cmd_exists(Context& c) {
    const auto& v = c.s.solver;
    const auto radii = v.radii.empty() ? std::vector<double>{v.R} : v.radii;
    CertificateReport table("existence condition over sampled radii", "holds at some sampled radius");
    double first = 0.0;
    for (double R : radii) {
        const auto one = existence_condition(c.model.M, c.model.a, R, v.T_o);
        const auto& row = one.rows().front();
        table.add("R = " + fd(R), row.lhs, row.rhs, row.verdict, row.detail);
        if (first == 0.0 && row.verdict == Verdict::holds) first = R;
    }
    c.rep.raw(table.to_text());
    c.out.headline.verdict = first > 0.0 ? 1 : 0;
    if (first == 0.0) {
        double best = HUGE_VAL;
        for (const auto& r : table.rows())
            if (r.lhs > 0.0) best = std::min(best, r.rhs / r.lhs);
        c.rep.kv("existence condition", "fails at every sampled radius").kv("smallest rhs/lhs", best);
        c.out.exit_code = exit_hypothesis;
        return;
    }
    c.rep.kv("smallest radius where the condition holds", first);
    if (!v.solve) return;
    // Continue with the exhaustion starting at the support of u_-.
    const double outer = v.outer > 0.0 ? v.outer : first + 2.0 * v.T_o;
    Scenario s2 = c.s;
    s2.solver.outer = outer;
    if (s2.solver.R_schedule.empty() || s2.solver.R_schedule.front() < outer) s2.solver.R_schedule = {outer, 2 * outer};
    Context c2{s2, c.model, {}, {}};
    subsolution_pipeline(c2, first);
    c.rep.raw(c2.rep.str());
    c.out.headline.residual = c2.out.headline.residual;
    c.out.headline.center = c2.out.headline.center;
    for (auto& f : c2.out.files) c.out.files.push_back(std::move(f));
}

RadialField phi_field(Context& c, GridPtr grid) {
    const auto& spec = c.s.solver.phi;
    if (spec == "poisson") {
        const auto a = c.model.a;
        const auto rho = RadialField::sample(grid, [&](double r) { return std::max(0.0, c.s.params.H * a(r)); });
        const auto v = poisson_solve(c.model.M, rho).v;
        return log_substitution(c.model.M, v, &rho).phi;
    }
    const auto e = Expression::parse(spec.empty() ? "1" : spec, c.model.symbols);
    return RadialField::sample(grid, [&](double r) { return e(r); });
}

void cmd_nonexist(Context& c) {
    const auto t = theorem_from_string(c.s.theorem);
    const auto P = c.problem();
    auto opt = c.nonexist();
    c.rep.kv("theorem key", to_string(t));
    CertificateReport cert("");
    switch (t) {
        case Theorem::thm33: {
            cert = thm33_check(P, c.s.params, opt);
            if (!c.s.solver.R_schedule.empty()) {
                const auto ns = default_n_schedule();
                const auto& radii = c.s.solver.R_schedule;
                const auto centers = parallel_map(radii.size(), [&](std::size_t i) {
                    return blowup_solution(P, radii[i], ns, c.blowup()).solution[0];
                });
                std::string csv = "R,center\n";
                for (std::size_t i = 0; i < radii.size(); ++i) csv += fd(radii[i]) + "," + fd(centers[i]) + "\n";
                c.rep.kv("blow-up limits at the center", list(centers));
                c.file("blowup_centers.csv", csv);
                c.out.headline.center = centers.back();
            }
            break;
        }
        case Theorem::lemma31: {
            const auto radii = c.schedule();
            const double R2 = 2.0 * radii.back();
            auto grid = RadialGrid::ball(R2, c.s.solver.mesh);
            const double top =
                c.s.has("solver.super") ? c.s.solver.super : default_super_value(P, *grid, c.s.solver.boundary);
            const auto sol = solve_bvp_monotone(P, R2, c.s.solver.boundary, RadialField::constant(grid, c.s.solver.sub),
                                                RadialField::constant(grid, top), monotone(c.s));
            c.rep.kv("solution residual", sol.residual);
            c.out.headline.residual = sol.residual;
            c.out.headline.center = sol.solution[0];
            cert = lemma31_certificate(P, sol.solution, c.s.params.p, c.s.params.A, radii, c.s.solver.tol);
            break;
        }
        case Theorem::thm32:
        case Theorem::thm32prime: {
            auto grid = RadialGrid::ball(c.s.solver.range_hi * (1.0 + 1e-9), c.s.solver.mesh);
            const auto phi = phi_field(c, grid);
            c.file("phi.csv", field_csv(phi));
            cert = t == Theorem::thm32 ? thm32_check(P, phi, c.s.params, opt, nullptr, c.s.solver.tol)
                                       : thm32prime_check(P, phi, c.s.params, opt, nullptr, c.s.solver.tol);
            break;
        }
        case Theorem::cor317: cert = cor317_check(P, c.s.params, opt); break;
        case Theorem::cor32pp: cert = cor32pp_check(P, c.s.params, opt); break;
    }
    c.certificate(cert);
    const std::string what = t == Theorem::lemma31 ? "estimate" : "non-existence";
    c.rep.kv("verdict", what + (cert.certified() ? " certified" : " not certified"));
}

void cmd_compare(Context& c) {
    if (c.s.manifold.type != "euclidean") throw ConfigError("compare runs on the euclidean model");
    ABOptions opt;
    opt.cross_check = c.s.solver.cross_check;
    opt.blowup = c.blowup();
    if (!c.s.solver.R_schedule.empty()) opt.radii = c.s.solver.R_schedule;
    c.rep.kv("k", c.s.k).kv("lambda", c.s.lambda).kv("m", std::to_string(c.s.manifold.dimension));
    c.certificate(ab_comparison_scenario(c.s.k, c.s.manifold.dimension, c.s.lambda, opt));
}

void cmd_green(Context& c) {
    const GreenKernel G(c.model.M);
    auto radii = c.s.solver.radii;
    if (radii.empty())
        for (int i = 0; i <= 40; ++i) radii.push_back(0.01 * std::pow(1e4, i / 40.0));
    std::string csv = "r,G\n";
    for (double r : radii) csv += fd(r) + "," + fd(G(r)) + "\n";
    c.rep.kv("non-parabolic", "yes").kv("radii", std::to_string(radii.size())).kv("G(1)", G(1.0));
    c.file("green.csv", csv);
}

void cmd_poisson(Context& c) {
    if (!c.model.rho) throw ConfigError("poisson needs coefficients.rho");
    auto grid = RadialGrid::ball(c.s.solver.R, c.s.solver.mesh);
    const auto rho = RadialField::sample(grid, c.model.rho);
    const auto res = poisson_solve(c.model.M, rho);
    const auto sub = log_substitution(c.model.M, res.v, &rho);
    c.rep.kv("R", c.s.solver.R)
        .kv("mass", res.mass)
        .kv("residual", res.residual)
        .kv("max v", res.max_value)
        .kv("v(0)", res.v[0])
        .kv("log substitution residual", sub.residual)
        .kv("exponent clamped", sub.clamped ? "yes" : "no");
    for (const auto& n : res.notes) c.rep.kv("note", n);
    for (const auto& n : sub.notes) c.rep.kv("note", n);
    c.out.headline.residual = res.residual;
    c.out.headline.center = res.v[0];
    c.file("potential.csv", field_csv(res.v));
    c.file("phi.csv", field_csv(sub.phi));
}

using Handler = void (*)(Context&);

Handler handler(const std::string& command) {
    static const std::pair<const char*, Handler> table[] = {
        {"eigen", cmd_eigen},     {"lambda-star", cmd_lambda_star}, {"duality", cmd_duality},
        {"solve", cmd_solve},     {"blowup", cmd_blowup},           {"maximal", cmd_maximal},
        {"subsolution", cmd_subsolution}, {"exists", cmd_exists},   {"nonexist", cmd_nonexist},
        {"compare", cmd_compare}, {"green", cmd_green},             {"poisson", cmd_poisson},
    };
    for (const auto& [name, h] : table)
        if (command == name) return h;
    throw ConfigError("unknown command '" + command + "'");
}

std::string cell(double x) { return std::isnan(x) ? "" : fd(x); }

}  // namespace

RunResult run_command(const Scenario& s, const std::string& command) {
    Scenario sc = s;
    sc.command = command;
    RunResult result;
    std::string header = "scenario: " + (s.name.empty() ? std::string("unnamed") : s.name) + "\ncommand: " + command + "\n";
    std::optional<Context> c;
    // Files and report lines produced before an error are kept.
    auto fail = [&](int code, const std::string& kind, const char* what) {
        if (c) {
            result.files = std::move(c->out.files);
            header += c->rep.str();
        }
        result.exit_code = code;
        result.report = header + "error (" + kind + "): " + what + "\n";
    };
    try {
        c.emplace(Context{sc, build_model(sc), {}, {}});
        handler(command)(*c);
        result = std::move(c->out);
        result.report = header + c->rep.str();
    } catch (const ConfigError& e) {
        fail(exit_config, "configuration", e.what());
    } catch (const DomainError& e) {
        fail(exit_config, "domain", e.what());
    } catch (const HypothesisError& e) {
        fail(exit_hypothesis, "hypothesis", e.what());
    } catch (const std::exception& e) {
        fail(exit_numerical, "numerical", e.what());
    }
    result.report += "exit code: " + std::to_string(result.exit_code) + "\n";
    return result;
}

int run_scenario(const Scenario& s, const std::string& command, const std::filesystem::path& out_dir) {
    if (!std::filesystem::is_directory(out_dir)) return exit_config;
    const auto res = run_command(s, command);
    auto write = [&](const std::string& name, const std::string& content) {
        std::ofstream f(out_dir / name, std::ios::binary);
        if (!f) throw ConfigError("cannot write '" + (out_dir / name).string() + "'");
        f << content;
    };
    for (const auto& [name, content] : res.files) write(name, content);
    write(command + "_report.txt", res.report);
    return res.exit_code;
}

std::string sweep(const Scenario& s, const std::string& param, const std::vector<double>& values) {
    if (s.command.empty() || s.command == "sweep") throw ConfigError("sweep needs the scenario's command");
    {
        Scenario probe = s;
        set_scalar(probe, param, values.empty() ? 0.0 : values.front());
    }
    const auto rows = parallel_map(values.size(), [&](std::size_t i) {
        Scenario si = s;
        set_scalar(si, param, values[i]);
        const auto r = run_command(si, s.command);
        const auto& h = r.headline;
        return fd(values[i]) + "," + std::to_string(r.exit_code) + "," + (h.verdict < 0 ? "" : std::to_string(h.verdict)) +
               "," + cell(h.eigenvalue) + "," + cell(h.residual) + "," + cell(h.center) + "\n";
    });
    std::string out = "value,status,verdict,eigenvalue,residual,center\n";
    for (const auto& r : rows) out += r;
    return out;
}

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        std::stringstream ss(text);
        std::string part;
        std::vector<double> p;
        while (std::getline(ss, part, ':')) {
            char* end = nullptr;
            p.push_back(std::strtod(part.c_str(), &end));
            if (part.empty() || *end != '\0') throw ConfigError("bad range '" + text + "'");
        }
        if (p.size() != 3 || !(p[1] > 0.0) || p[2] < p[0]) throw ConfigError("range must be lo:step:hi with step > 0");
        const auto count = static_cast<long>(std::floor((p[2] - p[0]) / p[1] + 1e-9));
        for (long i = 0; i <= count; ++i) out.push_back(p[0] + static_cast<double>(i) * p[1]);
        return out;
    }
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (part.find_first_not_of(" \t") == std::string::npos) continue;
        char* end = nullptr;
        const double v = std::strtod(part.c_str(), &end);
        while (end && (*end == ' ' || *end == '\t')) ++end;
        if (*end != '\0') throw ConfigError("bad value '" + part + "'");
        out.push_back(v);
    }
    return out;
}

}  // namespace logman::cli
