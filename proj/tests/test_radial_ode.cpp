#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "logman/error.hpp"
#include "logman/radial_ode.hpp"

using namespace logman;
using std::numbers::pi;

namespace {

double max_abs_interior(const std::vector<double>& v, const RadialGrid& g, const std::vector<double>& exact) {
    double e = 0.0;
    for (std::size_t i = g.first_unknown(); i <= g.last_unknown(); ++i)
        e = std::max(e, std::abs(v[i] - exact[i]));
    return e;
}

}  // namespace

TEST_CASE("grid construction") {
    auto g = RadialGrid::ball(1.0, 4);
    REQUIRE(g->size() == 6);
    CHECK(g->node(0) == 0.0);
    for (int i = 1; i <= 4; ++i) CHECK(g->node(i) == doctest::Approx(0.2 * i).epsilon(1e-15));
    CHECK(g->node(5) == 1.0);

    auto gg = RadialGrid::ball(10.0, 100, Grading::geometric, 1.02);
    CHECK(gg->node(1) < 0.1);
    for (std::size_t i = 1; i < gg->size(); ++i) CHECK(gg->node(i) > gg->node(i - 1));
    CHECK(gg->node(100) < 10.0);
    CHECK(gg->node(101) == 10.0);

    CHECK_THROWS_AS(RadialGrid::ball(0.0, 16), DomainError);
    CHECK_THROWS_AS(RadialGrid::ball(1.0, 2), DomainError);
    CHECK_THROWS_AS(RadialGrid::annulus(2.0, 1.0, 10), DomainError);

    const double radii[] = {5, 10, 20, 50, 100};
    auto nested = RadialGrid::nested_balls(radii, 200);
    for (std::size_t k = 0; k + 1 < nested.size(); ++k) {
        const auto& a = nested[k]->nodes();
        const auto& b = nested[k + 1]->nodes();
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-14));
        CHECK(a.back() == radii[k]);
    }
    CHECK(nested.back()->size() >= 202);
}

TEST_CASE("discrete Laplacian on closed forms") {
    auto E3 = ModelManifold::euclidean(3);
    auto grid = RadialGrid::ball(1.0, 50);
    auto op = assemble(E3, grid, RadialField::constant(grid, 0.0));
    auto r2 = RadialField::sample(grid, [](double r) { return r * r; });
    auto lap = op.apply(r2.values());
    for (std::size_t i = 0; i <= grid->last_unknown(); ++i)
        CHECK(lap[i] == doctest::Approx(6.0).epsilon(1e-11));

    auto shifted = assemble(E3, grid, RadialField::constant(grid, 5.0));
    auto one = shifted.apply(RadialField::constant(grid, 1.0).values());
    for (std::size_t i = 0; i <= grid->last_unknown(); ++i) CHECK(one[i] == doctest::Approx(5.0));

    // Graded grids keep r^2 exact as well.
    auto graded = RadialGrid::ball(2.0, 60, Grading::geometric, 1.03);
    auto opg = assemble(ModelManifold::euclidean(5), graded, RadialField::constant(graded, 0.0));
    auto lg = opg.apply(RadialField::sample(graded, [](double r) { return r * r; }).values());
    for (std::size_t i = 0; i <= graded->last_unknown(); ++i)
        CHECK(lg[i] == doctest::Approx(10.0).epsilon(1e-10));

    // Hyperbolic plane: Delta cosh r = 2 cosh r, second order.
    auto H2 = ModelManifold::hyperbolic(2, 1.0);
    double prev = 0.0;
    for (int n : {99, 199, 399}) {
        auto gh = RadialGrid::ball(2.0, n);
        auto oph = assemble(H2, gh, RadialField::constant(gh, 0.0));
        auto l = oph.apply(RadialField::sample(gh, [](double r) { return std::cosh(r); }).values());
        auto ex = sample([](double r) { return 2 * std::cosh(r); }, *gh);
        const double err = max_abs_interior(l, *gh, ex);
        CHECK(err < 0.05);
        if (prev > 0.0) CHECK(std::log2(prev / err) > 1.8);
        prev = err;
    }
}

TEST_CASE("Dirichlet solves") {
    auto E3 = ModelManifold::euclidean(3);
    auto grid = RadialGrid::ball(1.0, 40);
    auto op = assemble(E3, grid, RadialField::constant(grid, 0.0));
    auto u = solve_linear(op, RadialField::constant(grid, -6.0), 0.0);
    for (std::size_t i = 0; i < grid->size(); ++i)
        CHECK(u[i] == doctest::Approx(1.0 - grid->node(i) * grid->node(i)).epsilon(1e-12));

    auto z = solve_linear(op, RadialField::constant(grid, 0.0), 0.0);
    for (double x : z.values()) CHECK(x == 0.0);

    auto coarse = RadialGrid::ball(1.0, 8);
    auto stiff = assemble(E3, coarse, RadialField::constant(coarse, -1e6));
    auto s = solve_linear(stiff, RadialField::constant(coarse, 3.0), 0.0);
    for (std::size_t i = 0; i + 2 < coarse->size(); ++i) CHECK(s[i] == doctest::Approx(-3e-6).epsilon(1e-3));

    // Annulus: harmonic profile 2/r - 1 between r = 1 and r = 2 is exact only
    // to second order; check the order.
    double prev = 0.0;
    for (int n : {50, 100, 200}) {
        auto ga = RadialGrid::annulus(1.0, 2.0, n);
        auto opa = assemble(E3, ga, RadialField::constant(ga, 0.0));
        auto ua = solve_linear(opa, RadialField::constant(ga, 0.0), 1.0, 0.0);
        double err = 0.0;
        for (std::size_t i = 0; i < ga->size(); ++i)
            err = std::max(err, std::abs(ua[i] - (2.0 / ga->node(i) - 1.0)));
        if (prev > 0.0) CHECK(std::log2(prev / err) > 1.8);
        prev = err;
    }
    CHECK(prev < 1e-5);
}

TEST_CASE("mesh refinement order for a smooth solution") {
    // -Delta u = lambda-free test: u = cos(r) on euclidean R^3 ball of radius 2.
    auto E3 = ModelManifold::euclidean(3);
    auto exact = [](double r) { return std::cos(r); };
    auto lap = [](double r) { return r == 0.0 ? -3.0 : -std::cos(r) - 2.0 * std::sin(r) / r; };
    double prev = 0.0;
    for (int n : {63, 127, 255}) {
        auto g = RadialGrid::ball(2.0, n);
        auto op = assemble(E3, g, RadialField::constant(g, 0.0));
        auto u = solve_linear(op, RadialField::sample(g, lap), exact(2.0));
        double err = 0.0;
        for (std::size_t i = 0; i < g->size(); ++i) err = std::max(err, std::abs(u[i] - exact(g->node(i))));
        if (prev > 0.0) CHECK(std::log2(prev / err) >= 1.8);
        prev = err;
    }
}

TEST_CASE("discrete maximum principle") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto M = ModelManifold::hyperbolic(3, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        auto g = RadialGrid::ball(3.0, 80);
        std::vector<double> c(g->size()), f(g->size());
        for (auto& x : c) x = -5.0 * U(rng);  // operator Delta - |c|
        for (auto& x : f) x = U(rng);         // Delta u - |c| u = f >= 0
        auto op = assemble(make_geometry(M, g), c);
        auto u = solve_dirichlet(op, f, 0.0, 0.0);
        for (double x : u) CHECK(x <= 0.0);
    }
}

TEST_CASE("ball and sphere integrals") {
    auto E3 = ModelManifold::euclidean(3);
    auto g = RadialGrid::ball(1.0, 30);
    CHECK(integrate_ball(E3, RadialField::constant(g, 1.0), 1.0, 1.0) == doctest::Approx(4 * pi / 3).epsilon(1e-13));
    auto r = RadialField::sample(g, [](double x) { return x; });
    CHECK(integrate_ball(E3, r, 2.0, 1.0) == doctest::Approx(4 * pi / 5).epsilon(1e-13));
    CHECK(integrate_sphere(E3, RadialField::constant(g, 2.5), 0.5) == doctest::Approx(2.5 * 4 * pi * 0.25));
    auto neg = RadialField::constant(g, -1.0);
    CHECK_THROWS_AS(integrate_ball(E3, neg, 0.5, 1.0), DomainError);
    CHECK(integrate_ball(E3, neg, 2.0, 1.0) == doctest::Approx(4 * pi / 3).epsilon(1e-13));

    auto pos = RadialField::sample(g, [](double x) { return 1.0 + std::sin(7 * x) * std::sin(7 * x); });
    double prev = 0.0;
    for (double R = 0.0; R <= 1.0; R += 0.01) {
        const double I = integrate_ball(E3, pos, 1.0, R);
        CHECK(I >= prev);
        prev = I;
    }
}

TEST_CASE("logistic residual") {
    auto E3 = ModelManifold::euclidean(3);
    auto g = RadialGrid::ball(2.0, 100);
    LogisticProblem p(E3, [](double) { return 1.0; }, [](double) { return 1.0; }, 2.0);
    auto one = RadialField::constant(g, 1.0);
    CHECK(residual(p, one) < 1e-13);

    LogisticProblem lin(E3, [](double) { return 0.0; }, [](double) { return 0.0; }, 2.0);
    auto ga = RadialGrid::annulus(1.0, 3.0, 200);
    auto harm = RadialField::sample(ga, [](double r) { return 1.0 / r; });
    CHECK(residual(lin, harm) < 1e-3);

    const double eps = 1e-3;
    auto bumped = one;
    bumped[50] += eps;
    const double h = 2.0 / 101;
    const double res = residual(p, bumped);
    CHECK(res > 0.5 * eps / (h * h));
    CHECK(res < 3.0 * eps / (h * h));
    CHECK_THROWS_AS(LogisticProblem(E3, [](double) { return 1.0; }, [](double) { return 1.0; }, 1.0), DomainError);
}

TEST_CASE("field csv round trip") {
    auto g = RadialGrid::ball(1.0, 10);
    auto u = RadialField::sample(g, [](double r) { return std::exp(-r) / 3.0; });
    const std::string path = "field_roundtrip_test.csv";
    u.write_csv(path);
    auto v = RadialField::read_csv(path);
    std::remove(path.c_str());
    REQUIRE(v.size() == u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        CHECK(v[i] == u[i]);
        CHECK(v.r(i) == u.r(i));
    }
    CHECK(u.value_at(0.5 * (u.r(5) + u.r(6))) == doctest::Approx(0.5 * (u[5] + u[6])));
    CHECK_THROWS_AS(u.value_at(1.5), DomainError);
}
