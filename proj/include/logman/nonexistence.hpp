#pragma once

#include <span>
#include <string>
#include <vector>

#include "logman/certificate.hpp"
#include "logman/logistic_solver.hpp"
#include "logman/model_manifold.hpp"
#include "logman/radial_ode.hpp"
#include "logman/spectrum.hpp"

namespace logman {

enum class Theorem { thm32, thm33, lemma31, thm32prime, cor317, cor32pp };

std::string to_string(Theorem t);
/// Accepts "3.2", "3.3", "lemma3.1", "3.2prime", "cor3.17", "cor3.2pp".
Theorem theorem_from_string(const std::string& s);

struct NonexistenceParams {
    double H = 1.0;
    double K = 0.0;
    double A = 0.0;      ///< coefficient of |grad u|^2
    double sigma = 2.0;
    double beta = 0.0;
    double p = 2.0;
    double mu = 0.0;     ///< decay exponent of b
    double delta = 1.0;  ///< growth exponent of phi
    double q = 2.0;
};

/// Parameter constraints of a theorem, one row each. Inputs that are
/// rationals with denominator <= 10^4 are compared exactly.
CertificateReport params_check(Theorem theorem, const NonexistenceParams& params);

struct NonintegrabilityResult {
    Verdict divergent = Verdict::inconclusive;  ///< holds = r^w / F not integrable at infinity
    double exponent = 0.0;                      ///< F / r^w ~ r^s (log r)^l
    double log_exponent = 0.0;
    bool with_log_term = false;
    bool vanishing = false;  ///< F = 0 at some sample
    std::string proxy;
};

/// Decides whether r^w / F(r) fails to be integrable at infinity from a fit
/// of F / r^w. Samples need r > 1.
NonintegrabilityResult nonintegrability_test(std::span<const double> r, std::span<const double> F,
                                             double weight_exponent = 0.0, double slack = 0.05);

/// F(r) = int over the sphere of radius r of u^q, sampled geometrically
/// over the range (which must lie inside u's grid).
NonintegrabilityResult nonintegrability_test(const ModelManifold& M, const RadialField& u, double q,
                                             RadiusRange range, double weight_exponent = 0.0,
                                             int samples = 32);

/// Integral over B_r of f dV for a radial function, adaptive quadrature.
double ball_integral(const ModelManifold& M, const RadialFunction& f, double r);

/// Anchored form of the a-priori estimate
///   int_{B_R} b u^{p+sigma-2} <= C1 R^{-2(p+sigma-2)/(sigma-1)} int_{B_2R} b^{-(p-1)/(sigma-1)}
///                               + C2 int_{B_2R} (a_+/b)^{(p-1)/(sigma-1)} a_+ ,
/// with each C_i fitted so that its term alone matches the left side at the
/// smallest radius. u must be a solution to tol on its grid, which has to
/// reach the largest radius.
CertificateReport lemma31_certificate(const LogisticProblem& problem, const RadialField& u, double p,
                                      double grad_coeff_A, std::span<const double> R_schedule,
                                      double tol = 1e-6);

struct NonexistenceOptions {
    RadiusRange range{10.0, 1000.0};
    std::vector<double> spectral_schedule{5.0, 10.0, 20.0, 40.0};
    SpectralOptions spectral{};
    double slack = 0.05;
};

/// Hypotheses (a), (b)(i), (b)(ii), (c), (e) of the volume-growth
/// non-existence theorem together with its parameter constraints.
CertificateReport thm33_check(const LogisticProblem& problem, const NonexistenceParams& params,
                              const NonexistenceOptions& opt = {});

/// Hypotheses of the general theorem with a given positive phi: the phi
/// inequality with constant K, parameters, and when u is given the
/// non-integrability of (int_{dB_r} phi^{(beta+1)(2-p)/H} u^{2(beta+1)})^{-1}.
CertificateReport thm32_check(const LogisticProblem& problem, const RadialField& phi,
                              const NonexistenceParams& params, const NonexistenceOptions& opt = {},
                              const RadialField* u = nullptr, double tol = 1e-6);

/// Spectral form: lambda_1 of Delta + H a is >= 0, b is not identically zero,
/// and when u is given r / int_{B_r} u^{2(beta+1)} is not integrable.
CertificateReport cor317_check(const LogisticProblem& problem, const NonexistenceParams& params,
                               const NonexistenceOptions& opt = {}, const RadialField* u = nullptr);

/// Endpoint version: Delta phi + H a phi <= |grad phi|^2 / phi, phi >= C r^{1/delta},
/// and when u is given the weighted test on r^{delta p} / int_{dB_r} u^p.
CertificateReport thm32prime_check(const LogisticProblem& problem, const RadialField& phi,
                                   const NonexistenceParams& params, const NonexistenceOptions& opt = {},
                                   const RadialField* u = nullptr, double tol = 1e-6);

/// Integrable a_+ on a non-parabolic model. Throws HypothesisError when the
/// model is parabolic.
CertificateReport cor32pp_check(const LogisticProblem& problem, const NonexistenceParams& params,
                                const NonexistenceOptions& opt = {});

struct ABOptions {
    bool cross_check = false;  ///< also run blow-up limits for a = lambda k/(1+r^2)
    std::vector<double> radii{5.0, 10.0, 20.0, 40.0};
    BlowupOptions blowup{};
};

/// Decision rule for Delta u + lambda a u - u^2 = 0 on R^m with a <= k/r^2:
/// certified when lambda_lb / lambda >= min{1, (m-2)/4}, lambda_lb = (m-2)^2/(4k).
CertificateReport ab_comparison_scenario(double k, int m, double lambda, const ABOptions& opt = {});

}  // namespace logman
