#include <doctest.h>

#include <chrono>
#include <cmath>
#include <numbers>

#include "logman/error.hpp"
#include "logman/spectrum.hpp"
#include "oracles.hpp"

using namespace logman;
using std::numbers::pi;

namespace {

RadialFunction constant(double c) {
    return [c](double) { return c; };
}

}  // namespace

TEST_CASE("Dirichlet bottom of the Laplacian on unit balls") {
    auto r3 = dirichlet_bottom(ModelManifold::euclidean(3), constant(0.0), 0.0, 1.0);
    CHECK(r3.eigenvalue == doctest::Approx(pi * pi).epsilon(1e-5));

    const double j01 = oracle::bessel_j0_first_zero();
    CHECK(j01 == doctest::Approx(2.404825557695773).epsilon(1e-14));
    auto r2 = dirichlet_bottom(ModelManifold::euclidean(2), constant(0.0), 3.0, 1.0);
    CHECK(r2.eigenvalue == doctest::Approx(j01 * j01).epsilon(1e-5));

    // Constant potential shifts the spectrum.
    auto shifted = dirichlet_bottom(ModelManifold::euclidean(3), constant(1.0), 2.5, 1.0);
    CHECK(shifted.eigenvalue == doctest::Approx(r3.eigenvalue - 2.5).epsilon(1e-9));

    // Eigenfunction: positive, normalized, proportional to sin(pi r)/r.
    const auto& phi = r3.eigenfunction;
    auto M = ModelManifold::euclidean(3);
    CHECK(integrate_ball(M, phi, 2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(phi[phi.size() - 1] == 0.0);
    const double c = phi[0] / pi;
    for (std::size_t i = 1; i + 1 < phi.size(); i += 97) {
        CHECK(phi[i] > 0.0);
        const double r = phi.r(i);
        CHECK(phi[i] == doctest::Approx(c * std::sin(pi * r) / r).epsilon(1e-4));
    }
}

TEST_CASE("principal eigenvalue with weight") {
    auto E3 = ModelManifold::euclidean(3);
    CHECK(principal_eigenvalue(E3, constant(1.0), 1.0).eigenvalue == doctest::Approx(pi * pi).epsilon(1e-5));
    CHECK(principal_eigenvalue(E3, constant(4.0), 1.0).eigenvalue == doctest::Approx(pi * pi / 4).epsilon(1e-5));

    // Reduction w = r u turns the radial problem into -w'' = lambda a w on (0, R).
    auto a = [](double r) { return 1.0 / (1.0 + r * r); };
    const double lam = principal_eigenvalue(E3, a, 5.0).eigenvalue;
    const double ref = oracle::sturm_bottom([](double) { return 0.0; }, a, 5.0, 40000);
    CHECK(lam > 0.0);
    CHECK(lam < pi * pi * 26);
    CHECK(lam == doctest::Approx(ref).epsilon(1e-3));

    // Sign-changing weight: the eigenfunction is still positive.
    auto sc = principal_eigenvalue(E3, [](double r) { return 1.0 - r; }, 3.0);
    for (std::size_t i = 0; i + 1 < sc.eigenfunction.size(); ++i) CHECK(sc.eigenfunction[i] > 0.0);
    CHECK_THROWS_AS(principal_eigenvalue(E3, [](double r) { return -r; }, 2.0), HypothesisError);
    CHECK_THROWS_AS(principal_eigenvalue(E3, constant(0.0), 2.0), HypothesisError);
}

TEST_CASE("Rayleigh quotient consistency and positivity") {
    auto M = ModelManifold::hyperbolic(3, 0.7);
    auto grid = RadialGrid::ball(4.0, 500);
    auto geo = make_geometry(M, grid);
    auto a = sample([](double r) { return std::cos(r); }, *grid);
    for (double mu : {0.0, 1.0, 5.0}) {
        auto res = dirichlet_bottom(geo, a, mu);
        const double q = rayleigh_quotient(*geo, a, mu, res.eigenfunction.values());
        CHECK(std::abs(q - res.eigenvalue) <= 1e-8 * std::abs(res.eigenvalue));
        for (std::size_t i = 0; i + 1 < grid->size(); ++i) CHECK(res.eigenfunction[i] > 0.0);
    }
    auto pe = principal_eigenvalue(geo, a);
    const double q0 = rayleigh_quotient(*geo, a, 0.0, pe.eigenfunction.values());
    double wa = 0.0, ww = 0.0;
    for (std::size_t i = 0; i + 1 < grid->size(); ++i) {
        wa += a[i] * pe.eigenfunction[i] * pe.eigenfunction[i] * geo->volume()[i];
        ww += pe.eigenfunction[i] * pe.eigenfunction[i] * geo->volume()[i];
    }
    CHECK(q0 * ww / wa == doctest::Approx(pe.eigenvalue).epsilon(1e-8));
}

TEST_CASE("lambda_* along schedules") {
    const double sched[] = {5, 10, 20, 50, 100};
    auto flat = lambda_star(ModelManifold::euclidean(3), constant(1.0), sched);
    for (std::size_t k = 0; k < 5; ++k)
        CHECK(flat.sequence[k] == doctest::Approx(pi * pi / (sched[k] * sched[k])).epsilon(1e-3));
    CHECK(flat.upper_bound == flat.sequence.back());
    CHECK(flat.eigenvalue < 2e-4);
    CHECK(flat.eigenvalue >= 0.0);

    // a = 1/(1+r^2)^2 <= (1/4)/r^2: lambda_* >= (m-2)^2/(4 k') = 1 in R^3.
    auto fast = lambda_star(ModelManifold::euclidean(3),
                            [](double r) { return 1.0 / ((1 + r * r) * (1 + r * r)); }, sched);
    for (double v : fast.sequence) CHECK(v >= 1.0);
    for (std::size_t k = 0; k + 1 < 5; ++k) CHECK(fast.sequence[k + 1] <= fast.sequence[k] + 1e-8);

    // Hyperbolic 3-space: lambda_1(R) = 1 + pi^2/R^2 from the 1-D reduction.
    const double hs[] = {5, 10, 20, 40};
    auto hyp = lambda_star(ModelManifold::hyperbolic(3, 1.0), constant(1.0), hs);
    for (std::size_t k = 0; k < 4; ++k) {
        const double ref = oracle::sturm_bottom([](double) { return 1.0; }, [](double) { return 1.0; }, hs[k], 20000);
        CHECK(ref == doctest::Approx(1 + pi * pi / (hs[k] * hs[k])).epsilon(1e-6));
        CHECK(hyp.sequence[k] == doctest::Approx(ref).epsilon(2e-4));
    }
    CHECK(hyp.eigenvalue == doctest::Approx(1.0).epsilon(2e-3));

    const double short_sched[] = {1, 2, 3};
    CHECK_THROWS_AS(lambda_star(ModelManifold::euclidean(3), constant(1.0), short_sched), DomainError);
}

TEST_CASE("spectral bottom limits and sign verdicts") {
    const double sched[] = {5, 10, 20, 40};
    auto negw = spectrum_bottom(ModelManifold::euclidean(3), [](double r) { return -1.0 - r; }, 2.0, sched);
    CHECK(negw.nonnegative);
    auto flat = spectrum_bottom(ModelManifold::euclidean(3), constant(1.0), 1.0, sched);
    CHECK(flat.eigenvalue == doctest::Approx(-1.0).epsilon(1e-3));
    CHECK_FALSE(flat.nonnegative);
    auto hyp = spectrum_bottom(ModelManifold::hyperbolic(3, 1.0), constant(1.0), 0.5, sched);
    CHECK(hyp.eigenvalue == doctest::Approx(0.5).epsilon(5e-3));
    CHECK(hyp.nonnegative);
    for (std::size_t k = 0; k + 1 < 4; ++k) CHECK(hyp.sequence[k + 1] <= hyp.sequence[k] + 1e-8);
}

TEST_CASE("duality between lambda_* and the spectral bottom") {
    const double sched[] = {5, 10, 20, 40};
    std::vector<double> mus;
    for (int j = 0; j <= 20; ++j) mus.push_back(0.1 * j);
    auto rep = duality_check(ModelManifold::hyperbolic(3, 1.0), constant(1.0), sched, mus);
    CHECK(rep.certified());
    CHECK(rep.rows()[0].lhs <= 0.05);

    auto rep2 = duality_check(ModelManifold::euclidean(3), [](double r) { return 1.0 / (1 + r * r); },
                              sched, mus, {.n = 1000});
    CHECK(rep2.certified());

    CHECK_THROWS_AS(duality_check(ModelManifold::euclidean(3), constant(-1.0), sched, mus), HypothesisError);
    const double tiny[] = {0.0, 0.01};
    CHECK_THROWS_AS(duality_check(ModelManifold::hyperbolic(3, 1.0), constant(1.0), sched, tiny),
                    InconclusiveError);
}
