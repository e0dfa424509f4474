#include "logman/nonexistence.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/rational.hpp>

#include "logman/error.hpp"
#include "logman/fitting.hpp"
#include "logman/parallel.hpp"

namespace logman {

namespace {

using Rat = boost::rational<long long>;

// A parameter value carried both as a double and, when it is a small
// rational, exactly.
struct Num {
    double d = 0.0;
    std::optional<Rat> q;
};

std::optional<Rat> to_rational(double x) {
    if (!std::isfinite(x) || std::abs(x) > 1e9) return std::nullopt;
    long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double y = x;
    for (int it = 0; it < 40; ++it) {
        const double a = std::floor(y);
        const long long ai = static_cast<long long>(a);
        const long long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
        if (k2 > 10000) break;
        h0 = h1, h1 = h2, k0 = k1, k1 = k2;
        if (static_cast<double>(h1) / static_cast<double>(k1) == x) return Rat(h1, k1);
        const double frac = y - a;
        if (frac == 0.0) break;
        y = 1.0 / frac;
    }
    return std::nullopt;
}

Num num(double x) { return {x, to_rational(x)}; }

Num lift(Num a, Num b, double d, auto op) {
    Num r{d, std::nullopt};
    if (a.q && b.q) r.q = op(*a.q, *b.q);
    return r;
}
Num operator+(Num a, Num b) { return lift(a, b, a.d + b.d, [](Rat x, Rat y) { return x + y; }); }
Num operator-(Num a, Num b) { return lift(a, b, a.d - b.d, [](Rat x, Rat y) { return x - y; }); }
Num operator*(Num a, Num b) { return lift(a, b, a.d * b.d, [](Rat x, Rat y) { return x * y; }); }
Num operator/(Num a, Num b) {
    if (b.d == 0.0) return {HUGE_VAL, std::nullopt};
    return lift(a, b, a.d / b.d, [](Rat x, Rat y) { return x / y; });
}
Num max(Num a, Num b) {
    if (a.q && b.q) return *a.q >= *b.q ? a : b;
    return a.d >= b.d ? a : b;
}

Num min(Num a, Num b) {
    if (a.q && b.q) return *a.q <= *b.q ? a : b;
    return a.d <= b.d ? a : b;
}

enum class Rel { lt, le, gt, ge };

void compare(CertificateReport& rep, const std::string& name, Num lhs, Rel rel, Num rhs) {
    const bool exact = lhs.q && rhs.q;
    bool ok = false;
    if (exact) {
        const Rat& a = *lhs.q;
        const Rat& b = *rhs.q;
        ok = rel == Rel::lt ? a < b : rel == Rel::le ? a <= b : rel == Rel::gt ? a > b : a >= b;
    } else {
        const double a = lhs.d, b = rhs.d;
        ok = rel == Rel::lt ? a < b : rel == Rel::le ? a <= b : rel == Rel::gt ? a > b : a >= b;
    }
    rep.add(name, lhs.d, rhs.d, ok, exact ? "exact" : "floating point");
}

std::vector<double> geometric(double lo, double hi, int count) {
    std::vector<double> r(count);
    for (int k = 0; k < count; ++k) r[k] = lo * std::pow(hi / lo, static_cast<double>(k) / (count - 1));
    return r;
}

void check_range(const RadiusRange& range) {
    if (!(range.lo > 1.0) || !(range.hi >= 10.0 * range.lo))
        throw DomainError("radius range must satisfy 1 < lo and hi >= 10 lo");
}

// b >= C / r^mu for large r: decay exponent from a log-log fit, C as the
// infimum of r^mu b over the range.
void add_b_lower(CertificateReport& rep, const std::string& name, const RadialFunction& b, double mu,
                 const RadiusRange& range, double slack) {
    const auto r = geometric(range.lo, range.hi, 48);
    std::vector<double> x, y;
    double C = HUGE_VAL;
    for (double ri : r) {
        const double v = b(ri);
        C = std::min(C, std::pow(ri, mu) * v);
        if (v > 0.0) {
            x.push_back(std::log(ri));
            y.push_back(std::log(v));
        }
    }
    if (x.size() < r.size()) {
        rep.add(name, HUGE_VAL, mu, false, "b vanishes inside the range");
        return;
    }
    const auto fit = fit_line(x, y);
    const double decay = -fit.slope;
    rep.add(name, decay, mu, decay <= mu + slack && C > 0.0,
            "fitted decay exponent vs mu, C = " + format_double(C));
}

// Growth exponent of I(r) = int_{B_r} f against a target, optionally with a
// log r factor divided out first.
void add_integral_growth(CertificateReport& rep, const std::string& name, const ModelManifold& M,
                         const RadialFunction& f, const RadiusRange& range, double target, bool log_factor,
                         double slack) {
    const auto r = geometric(range.lo, range.hi, 32);
    std::vector<double> I(r.size());
    double acc = ball_integral(M, f, r[0]);
    I[0] = acc;
    for (std::size_t k = 1; k < r.size(); ++k) {
        const double e = M.omega() *
                         boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                             [&](double s) { return f(s) * M.density(s); }, r[k - 1], r[k], 15, 1e-12);
        acc += e;
        I[k] = acc;
    }
    if (std::all_of(I.begin(), I.end(), [](double v) { return v == 0.0; })) {
        rep.add(name, -HUGE_VAL, target, true, "integral vanishes identically over the range");
        return;
    }
    std::vector<double> x, y;
    for (std::size_t k = 0; k < r.size(); ++k) {
        if (!(I[k] > 0.0)) continue;
        x.push_back(std::log(r[k]));
        y.push_back(std::log(I[k]) - (log_factor ? std::log(std::log(r[k])) : 0.0));
    }
    if (x.size() < 4) {
        rep.add(name, 0.0, target, Verdict::inconclusive, "too few positive samples to fit");
        return;
    }
    const auto fit = fit_line(x, y);
    rep.add(name, fit.slope, target, fit.slope <= target + slack,
            std::string("fitted exponent of the ball integral") + (log_factor ? " after dividing by log r" : ""));
}

// int_{B_R} w(r, u(r)) dV for a field, piecewise on the grid.
double field_ball_integral(const ModelManifold& M, const RadialField& u, double R,
                           const std::function<double(double, double)>& w) {
    const auto& r = u.grid()->nodes();
    if (R > r.back() * (1 + 1e-12)) throw DomainError("field does not reach radius " + format_double(R));
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < r.size() && r[i] < R; ++i) {
        const double lo = r[i], hi = std::min(r[i + 1], R);
        const double slope = (u[i + 1] - u[i]) / (r[i + 1] - r[i]);
        total += boost::math::quadrature::gauss<double, 7>::integrate(
            [&](double s) { return w(s, u[i] + slope * (s - lo)) * M.density(s); }, lo, hi);
    }
    return M.omega() * total;
}

// sup over unknown nodes of Delta_h phi + H a phi + K |phi'|^2 / phi.
double phi_inequality(const LogisticProblem& problem, const RadialField& phi, double H, double K) {
    for (double v : phi.values())
        if (!(v > 0.0)) throw DomainError("phi must be positive");
    const auto geo = make_geometry(problem.M, phi.grid());
    const auto a = sample(problem.a, *phi.grid());
    const auto L = RadialOperator(geo, std::vector<double>(phi.size(), 0.0)).apply(phi.values());
    const auto d = gradient(phi);
    double worst = -HUGE_VAL;
    for (std::size_t i = phi.grid()->first_unknown(); i <= phi.grid()->last_unknown(); ++i)
        worst = std::max(worst, L[i] + H * a[i] * phi[i] + K * d[i] * d[i] / phi[i]);
    return worst;
}

void add_params(CertificateReport& rep, Theorem t, const NonexistenceParams& p) {
    const auto params = params_check(t, p);
    for (const auto& row : params.rows())
        rep.add("param: " + row.name, row.lhs, row.rhs, row.verdict, row.detail);
}

void add_nonintegrability(CertificateReport& rep, const std::string& name, const NonintegrabilityResult& res) {
    std::string detail = res.proxy;
    if (res.vanishing) detail += " (F vanishes at a sample)";
    rep.add(name, res.exponent, 1.0, res.divergent, detail);
}

RadiusRange clip(RadiusRange range, const RadialField& u) {
    range.hi = std::min(range.hi, u.grid()->outer());
    if (!(range.hi > range.lo)) throw DomainError("solution grid does not reach the radius range");
    return range;
}

}  // namespace

std::string to_string(Theorem t) {
    switch (t) {
        case Theorem::thm32: return "3.2";
        case Theorem::thm33: return "3.3";
        case Theorem::lemma31: return "lemma3.1";
        case Theorem::thm32prime: return "3.2prime";
        case Theorem::cor317: return "cor3.17";
        case Theorem::cor32pp: return "cor3.2pp";
    }
    return {};
}

Theorem theorem_from_string(const std::string& s) {
    for (Theorem t : {Theorem::thm32, Theorem::thm33, Theorem::lemma31, Theorem::thm32prime, Theorem::cor317,
                      Theorem::cor32pp})
        if (to_string(t) == s) return t;
    throw ConfigError("unknown theorem '" + s + "'");
}

CertificateReport params_check(Theorem theorem, const NonexistenceParams& params) {
    const Num H = num(params.H), K = num(params.K), A = num(params.A), s = num(params.sigma),
              beta = num(params.beta), p = num(params.p), mu = num(params.mu), delta = num(params.delta),
              q = num(params.q);
    const Num zero = num(0), one = num(1), two = num(2), three = num(3);
    CertificateReport rep("parameters of " + to_string(theorem));
    switch (theorem) {
        case Theorem::thm32: {
            const Num top = H * (K + one) - one;
            compare(rep, "H > 0", H, Rel::gt, zero);
            compare(rep, "K > -1", K, Rel::gt, zero - one);
            compare(rep, "max{0,A} <= H(K+1)-1", max(zero, A), Rel::le, top);
            compare(rep, "max{0,A} <= beta", max(zero, A), Rel::le, beta);
            compare(rep, "beta <= H(K+1)-1", beta, Rel::le, top);
            compare(rep, "p > 1", p, Rel::gt, one);
            compare(rep, "sigma >= 1", s, Rel::ge, one);
            break;
        }
        case Theorem::thm33:
            compare(rep, "H >= 1", H, Rel::ge, one);
            compare(rep, "A <= 1", A, Rel::le, one);
            compare(rep, "A < H-1", A, Rel::lt, H - one);
            compare(rep, "1 < sigma", one, Rel::lt, s);
            compare(rep, "sigma <= 2H+1", s, Rel::le, two * H + one);
            compare(rep, "sigma < 2H-A", s, Rel::lt, two * H - A);
            compare(rep, "0 <= mu", zero, Rel::le, mu);
            compare(rep, "mu <= 2", mu, Rel::le, two);
            break;
        case Theorem::lemma31:
            compare(rep, "A <= 1", A, Rel::le, one);
            compare(rep, "sigma > 1", s, Rel::gt, one);
            compare(rep, "p >= 1", p, Rel::ge, one);
            compare(rep, "p > A+2", p, Rel::gt, A + two);
            break;
        case Theorem::thm32prime:
            compare(rep, "H > 0", H, Rel::gt, zero);
            compare(rep, "A <= -1", A, Rel::le, zero - one);
            compare(rep, "sigma >= 0", s, Rel::ge, zero);
            compare(rep, "p > 1", p, Rel::gt, one);
            compare(rep, "delta > 0", delta, Rel::gt, zero);
            break;
        case Theorem::cor317:
            compare(rep, "H >= 1", H, Rel::ge, one);
            compare(rep, "0 <= beta", zero, Rel::le, beta);
            compare(rep, "beta <= H-1", beta, Rel::le, H - one);
            rep.note("sigma may be any real number for strictly positive solutions");
            break;
        case Theorem::cor32pp:
            compare(rep, "sigma > 1", s, Rel::gt, one);
            compare(rep, "A <= -1", A, Rel::le, zero - one);
            compare(rep, "q > max{1, 3-sigma}", q, Rel::gt, max(one, three - s));
            compare(rep, "0 <= mu", zero, Rel::le, mu);
            compare(rep, "mu <= 2(sigma-1)/(sigma+q-2)", mu, Rel::le, two * (s - one) / (s + q - two));
            compare(rep, "p > (q+sigma-2)/(sigma-1)", p, Rel::gt, (q + s - two) / (s - one));
            break;
    }
    return rep;
}

NonintegrabilityResult nonintegrability_test(std::span<const double> r, std::span<const double> F,
                                             double weight_exponent, double slack) {
    if (r.size() != F.size() || r.size() < 4) throw DomainError("need at least 4 matching samples");
    NonintegrabilityResult out;
    std::vector<double> G(F.size());
    for (std::size_t k = 0; k < F.size(); ++k) {
        if (!(r[k] > 1.0)) throw DomainError("samples need r > 1");
        if (!(F[k] > 0.0)) {
            out.vanishing = true;
            out.divergent = Verdict::holds;
            out.proxy = "F vanishes, 1/F is not integrable";
            return out;
        }
        G[k] = F[k] / std::pow(r[k], weight_exponent);
    }
    const auto fit = fit_power_log(r, G);
    if (fit.degenerate) {
        out.proxy = "degenerate fit";
        return out;
    }
    out.exponent = fit.exponent;
    out.log_exponent = fit.log_exponent;
    out.with_log_term = fit.with_log_term;
    if (fit.exponent < 1.0 - slack) {
        out.divergent = Verdict::holds;
    } else if (fit.exponent > 1.0 + slack) {
        out.divergent = Verdict::fails;
    } else {
        // Borderline power: the log factor decides, (log r)^l with l <= 1 diverges.
        const bool div = !fit.with_log_term || fit.log_exponent <= 1.0 + slack;
        out.divergent = div ? Verdict::holds : Verdict::fails;
    }
    out.proxy = "fit F/r^" + format_double(weight_exponent) + " ~ r^" + format_double(out.exponent) +
                (fit.with_log_term ? " (log r)^" + format_double(out.log_exponent) : std::string()) +
                ", divergent iff exponent <= 1 + " + format_double(slack);
    return out;
}

NonintegrabilityResult nonintegrability_test(const ModelManifold& M, const RadialField& u, double q,
                                             RadiusRange range, double weight_exponent, int samples) {
    if (!(q > 0.0)) throw DomainError("exponent q must be > 0");
    check_range(range);
    if (range.hi > u.grid()->outer() * (1 + 1e-12)) throw DomainError("range exceeds the field's grid");
    const auto r = geometric(range.lo, range.hi, samples);
    std::vector<double> F(r.size());
    for (std::size_t k = 0; k < r.size(); ++k) F[k] = integrate_sphere(M, u, r[k], q);
    return nonintegrability_test(r, F, weight_exponent);
}

double ball_integral(const ModelManifold& M, const RadialFunction& f, double r) {
    if (!(r >= 0.0)) throw DomainError("ball radius must be >= 0");
    if (r == 0.0) return 0.0;
    return M.omega() * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                           [&](double s) { return f(s) * M.density(s); }, 0.0, r, 15, 1e-12);
}

CertificateReport lemma31_certificate(const LogisticProblem& problem, const RadialField& u, double p,
                                      double grad_coeff_A, std::span<const double> R_schedule, double tol) {
    const double s = problem.sigma, A = grad_coeff_A;
    if (!(p >= 1.0) || !(p > A + 2.0)) throw HypothesisError("a-priori estimate needs p >= 1 and p > A + 2");
    if (A > 1.0) throw HypothesisError("a-priori estimate needs A <= 1");
    if (R_schedule.size() < 2) throw DomainError("need at least two radii");
    for (std::size_t k = 1; k < R_schedule.size(); ++k)
        if (!(R_schedule[k] > R_schedule[k - 1])) throw DomainError("radii must increase");
    for (double v : sample(problem.b, *u.grid()))
        if (!(v > 0.0)) throw HypothesisError("a-priori estimate needs b > 0");

    CertificateReport rep("a-priori integral estimate", "the fitted inequality holds at every larger radius");
    const double res = residual(problem, u);
    if (std::all_of(u.values().begin(), u.values().end(), [](double v) { return v == 0.0; })) {
        rep.add("u is identically zero", 0.0, 0.0, true, "nothing to estimate");
        rep.note("u = 0: trivial pass");
        return rep;
    }
    if (res > tol) throw HypothesisError("u is not a solution: residual " + format_double(res));
    for (double v : u.values())
        if (v < 0.0) throw HypothesisError("u must be non-negative");

    const double e1 = -2.0 * (p + s - 2.0) / (s - 1.0);
    const double e2 = -(p - 1.0) / (s - 1.0);
    const double e3 = (p - 1.0) / (s - 1.0);
    const RadialFunction f1 = [&](double r) { return std::pow(problem.b(r), e2); };
    const RadialFunction f2 = [&](double r) {
        const double ap = std::max(0.0, problem.a(r));
        return ap == 0.0 ? 0.0 : std::pow(ap / problem.b(r), e3) * ap;
    };
    const std::size_t n = R_schedule.size();
    std::vector<double> lhs(n), T1(n), T2(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double R = R_schedule[k];
        lhs[k] = field_ball_integral(problem.M, u, R, [&](double r, double v) {
            return problem.b(r) * std::pow(std::max(v, 0.0), p + s - 2.0);
        });
        T1[k] = std::pow(R, e1) * ball_integral(problem.M, f1, 2 * R);
        T2[k] = ball_integral(problem.M, f2, 2 * R);
    }
    const double C1 = T1[0] > 0.0 ? lhs[0] / T1[0] : 0.0;
    const double C2 = T2[0] > 0.0 ? lhs[0] / T2[0] : 0.0;
    rep.note("constants fitted at R = " + format_double(R_schedule[0]) + ": C1 = " + format_double(C1) +
             ", C2 = " + format_double(C2));
    bool monotone = true;
    for (std::size_t k = 1; k < n; ++k) {
        const double rhs = C1 * T1[k] + C2 * T2[k];
        rep.add("R = " + format_double(R_schedule[k]), lhs[k], rhs, lhs[k] <= rhs * (1 + 1e-9),
                "T1 = " + format_double(T1[k]) + ", T2 = " + format_double(T2[k]));
        monotone = monotone && lhs[k] >= lhs[k - 1];
    }
    rep.add("left side non-decreasing in R", lhs.back(), lhs.front(), monotone);
    std::vector<double> x, y;
    for (std::size_t k = 0; k < n; ++k)
        if (lhs[k] > 0.0) {
            x.push_back(std::log(R_schedule[k]));
            y.push_back(std::log(lhs[k]));
        }
    if (x.size() >= 2) rep.note("fitted growth order of the left side: " + format_double(fit_line(x, y).slope));
    return rep;
}

CertificateReport thm33_check(const LogisticProblem& problem, const NonexistenceParams& params_in,
                              const NonexistenceOptions& opt) {
    check_range(opt.range);
    NonexistenceParams params = params_in;
    params.sigma = problem.sigma;
    const double H = params.H, mu = params.mu;
    CertificateReport rep("non-existence under volume growth", "the only non-negative solution is u = 0");
    add_params(rep, Theorem::thm33, params);

    add_b_lower(rep, "(a) b >= C / r^mu", problem.b, mu, opt.range, opt.slack);

    double sup = 0.0;
    bool finite = true;
    const int N = 4000;
    for (int k = 0; k <= N; ++k) {
        const double r = opt.range.hi * k / N;
        const double b = problem.b(r);
        if (!(b > 0.0)) {
            finite = false;
            break;
        }
        sup = std::max(sup, std::max(0.0, problem.a(r)) / b);
    }
    rep.add("(b)(i) sup a_+/b < inf", finite ? sup : HUGE_VAL, HUGE_VAL, finite && std::isfinite(sup),
            "grid sup over [0, " + format_double(opt.range.hi) + "]");

    add_integral_growth(rep, "(b)(ii) int_B_r a_+ = O(r^(2-mu) log r)", problem.M,
                        [&](double r) { return std::max(0.0, problem.a(r)); }, opt.range, 2.0 - mu, true,
                        opt.slack);

    const auto bottom = spectrum_bottom(problem.M, problem.a, H, opt.spectral_schedule, opt.spectral);
    rep.add("(c) lambda_1(Delta + H a) >= 0", bottom.upper_bound, 0.0, bottom.nonnegative,
            "largest-radius value, sign tolerance " + format_double(bottom.sign_tolerance));

    const double target = 2.0 + (2.0 - mu) * 2.0 * H / (problem.sigma - 1.0);
    const auto growth = classify_growth(problem.M, target, true, opt.range);
    rep.add("(e) vol B_r = O(r^target log r)", growth.fitted_exponent, target, growth.verdict, growth.note);
    return rep;
}

CertificateReport thm32_check(const LogisticProblem& problem, const RadialField& phi,
                              const NonexistenceParams& params_in, const NonexistenceOptions& opt,
                              const RadialField* u, double tol) {
    NonexistenceParams params = params_in;
    params.sigma = problem.sigma;
    CertificateReport rep("non-existence with a positive phi",
                          "no non-negative solution meets supp u and {b > 0} with the integrability condition");
    add_params(rep, Theorem::thm32, params);
    const double worst = phi_inequality(problem, phi, params.H, params.K);
    rep.add("Delta phi + H a phi + K |grad phi|^2/phi <= 0", worst, tol, worst <= tol, "sup over grid nodes");
    if (u) {
        const double H = params.H, beta = params.beta, p = params.p;
        const double ephi = (beta + 1.0) * (2.0 - p) / H;
        std::vector<double> w(u->size());
        for (std::size_t i = 0; i < w.size(); ++i)
            w[i] = std::pow(phi.value_at(u->r(i)), ephi / (2.0 * (beta + 1.0))) * (*u)[i];
        const RadialField weighted(u->grid(), std::move(w));
        add_nonintegrability(rep, "(int_dB_r phi^e u^(2(beta+1)))^-1 not in L1",
                             nonintegrability_test(problem.M, weighted, 2.0 * (beta + 1.0), clip(opt.range, *u)));
    } else {
        rep.note("no solution supplied: the integrability condition is a property of u and was not tested");
    }
    return rep;
}

CertificateReport cor317_check(const LogisticProblem& problem, const NonexistenceParams& params_in,
                               const NonexistenceOptions& opt, const RadialField* u) {
    NonexistenceParams params = params_in;
    params.sigma = problem.sigma;
    CertificateReport rep("spectral non-existence", "no positive solution with the integrability condition");
    add_params(rep, Theorem::cor317, params);
    const auto bottom = spectrum_bottom(problem.M, problem.a, params.H, opt.spectral_schedule, opt.spectral);
    rep.add("lambda_1(Delta + H a) >= 0", bottom.upper_bound, 0.0, bottom.nonnegative,
            "largest-radius value, sign tolerance " + format_double(bottom.sign_tolerance));
    double bmax = 0.0;
    for (int k = 0; k <= 4000; ++k) bmax = std::max(bmax, problem.b(opt.range.hi * k / 4000));
    rep.add("b >= 0, b not identically zero", bmax, 0.0, bmax > 0.0, "max of b over the sampled range");
    if (u) {
        const RadiusRange range = clip(opt.range, *u);
        check_range(range);
        const auto r = geometric(range.lo, range.hi, 32);
        std::vector<double> F(r.size());
        for (std::size_t k = 0; k < r.size(); ++k)
            F[k] = field_ball_integral(problem.M, *u, r[k], [&](double, double v) {
                return std::pow(std::max(v, 0.0), 2.0 * (params.beta + 1.0));
            });
        add_nonintegrability(rep, "r / int_B_r u^(2(beta+1)) not in L1", nonintegrability_test(r, F, 1.0));
    } else {
        rep.note("no solution supplied: the integrability condition is a property of u and was not tested");
    }
    return rep;
}

CertificateReport thm32prime_check(const LogisticProblem& problem, const RadialField& phi,
                                   const NonexistenceParams& params_in, const NonexistenceOptions& opt,
                                   const RadialField* u, double tol) {
    NonexistenceParams params = params_in;
    params.sigma = problem.sigma;
    for (double v : phi.values())
        if (!(v > 0.0)) throw DomainError("phi must be positive");
    CertificateReport rep("endpoint non-existence with a positive phi",
                          "no non-negative solution meets supp u and {b > 0} with the weighted integrability condition");
    add_params(rep, Theorem::thm32prime, params);

    const double worst = phi_inequality(problem, phi, params.H, -1.0);
    rep.add("Delta phi + H a phi <= |grad phi|^2/phi", worst, tol, worst <= tol, "sup over grid nodes");

    const RadiusRange range = clip(opt.range, phi);
    check_range(range);
    const auto r = geometric(range.lo, range.hi, 32);
    std::vector<double> x, y;
    double C = HUGE_VAL;
    for (double ri : r) {
        const double v = phi.value_at(ri);
        C = std::min(C, v / std::pow(ri, 1.0 / params.delta));
        x.push_back(std::log(ri));
        y.push_back(std::log(v));
    }
    const double slope = fit_line(x, y).slope;
    rep.add("phi >= C r^(1/delta)", slope, 1.0 / params.delta, slope >= 1.0 / params.delta - opt.slack && C > 0.0,
            "fitted growth exponent of phi, C = " + format_double(C));

    if (u) {
        add_nonintegrability(rep, "r^(delta p) / int_dB_r u^p not in L1",
                             nonintegrability_test(problem.M, *u, params.p, clip(opt.range, *u),
                                                   params.delta * params.p));
    } else {
        rep.note("no solution supplied: the weighted integrability condition was not tested");
    }
    return rep;
}

CertificateReport cor32pp_check(const LogisticProblem& problem, const NonexistenceParams& params_in,
                                const NonexistenceOptions& opt) {
    if (!is_nonparabolic(problem.M)) throw HypothesisError("the model is parabolic");
    check_range(opt.range);
    NonexistenceParams params = params_in;
    params.sigma = problem.sigma;
    const double s = params.sigma, mu = params.mu, p = params.p, q = params.q;
    CertificateReport rep("non-existence with integrable a_+", "no non-negative non-trivial solution");
    add_params(rep, Theorem::cor32pp, params);

    const RadialFunction ap = [&](double r) { return std::max(0.0, problem.a(r)); };
    add_integral_growth(rep, "(2ter) a_+ in L1", problem.M, ap, opt.range, 0.0, false, opt.slack);
    const double t3 = (2.0 * (s - 1.0) - mu * (q + s - 2.0)) * (p - 1.0) / (q - 1.0);
    add_integral_growth(rep, "(3ter) int_B_r a_+^p = O(r^target)", problem.M,
                        [&](double r) { return std::pow(ap(r), p); }, opt.range, t3, false, opt.slack);
    const double t4 = 2.0 + (2.0 - mu) * (s + q - 2.0) / (s - 1.0);
    const auto growth = classify_growth(problem.M, t4, false, opt.range);
    rep.add("(4ter) vol B_r = O(r^target)", growth.fitted_exponent, t4, growth.verdict, growth.note);
    add_b_lower(rep, "(5ter) b >= C / r^mu", problem.b, mu, opt.range, opt.slack);
    return rep;
}

CertificateReport ab_comparison_scenario(double k, int m, double lambda, const ABOptions& opt) {
    if (m < 3) throw DomainError("the comparison needs m >= 3");
    if (!(k > 0.0)) throw DomainError("the comparison needs k > 0");
    if (!(lambda > 0.0)) throw DomainError("lambda must be > 0");
    const Num mm = num(m), kk = num(k), lam = num(lambda), two = num(2), four = num(4), one = num(1);
    const Num lb = (mm - two) * (mm - two) / (four * kk);
    const Num ratio = lb / lam;
    const Num threshold = min(one, (mm - two) / four);

    CertificateReport rep("comparison rule for Delta u + lambda a u - u^2 = 0, a <= k/r^2",
                          "every non-negative solution vanishes");
    compare(rep, "lambda_lb / lambda >= min{1, (m-2)/4}", ratio, Rel::ge, threshold);
    rep.note("lambda_lb = (m-2)^2/(4k) = " + format_double(lb.d));
    if (ratio.q && threshold.q && *ratio.q == *threshold.q) rep.note("the rule holds with equality");

    if (opt.cross_check) {
        const LogisticProblem P(ModelManifold::euclidean(m),
                                [k, lambda](double r) { return lambda * k / (1.0 + r * r); },
                                [](double) { return 1.0; }, 2.0);
        const auto ns = default_n_schedule();
        const auto centers = parallel_map(opt.radii.size(), [&](std::size_t i) {
            return blowup_solution(P, opt.radii[i], ns, opt.blowup).solution[0];
        });
        std::string text = "blow-up limits at the center:";
        for (std::size_t i = 0; i < centers.size(); ++i)
            text += " R=" + format_double(opt.radii[i]) + ": " + format_double(centers[i]);
        rep.note(text);
    }
    return rep;
}

}  // namespace logman
