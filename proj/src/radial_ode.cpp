#include "logman/radial_ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "logman/error.hpp"

namespace logman {

GridPtr RadialGrid::ball(double R, int n, Grading grading, double ratio) {
    if (!(R > 0.0) || !std::isfinite(R)) throw DomainError("ball grid needs R > 0");
    if (n < 4) throw DomainError("ball grid needs at least 4 interior nodes");
    std::vector<double> r(static_cast<std::size_t>(n) + 2);
    r[0] = 0.0;
    if (grading == Grading::uniform || ratio == 1.0) {
        const double h = R / (n + 1);
        for (int i = 1; i <= n; ++i) r[i] = h * i;
    } else {
        if (!(ratio > 1.0) || !std::isfinite(ratio)) throw DomainError("grading ratio must be > 1");
        const double h1 = R * (ratio - 1.0) / (std::pow(ratio, n + 1) - 1.0);
        double h = h1;
        for (int i = 1; i <= n; ++i) {
            r[i] = r[i - 1] + h;
            h *= ratio;
        }
        if (!(r[n] < R)) throw DomainError("graded grid overshoots R");
    }
    r[n + 1] = R;
    return GridPtr(new RadialGrid(std::move(r)));
}

GridPtr RadialGrid::annulus(double r_in, double r_out, int n) {
    if (!(r_in > 0.0) || !(r_out > r_in) || !std::isfinite(r_out))
        throw DomainError("annulus grid needs 0 < r_in < r_out");
    if (n < 4) throw DomainError("annulus grid needs at least 4 interior nodes");
    std::vector<double> r(static_cast<std::size_t>(n) + 2);
    const double h = (r_out - r_in) / (n + 1);
    for (int i = 0; i <= n; ++i) r[i] = r_in + h * i;
    r[n + 1] = r_out;
    return GridPtr(new RadialGrid(std::move(r)));
}

GridPtr RadialGrid::from_nodes(std::vector<double> nodes) {
    if (nodes.size() < 6) throw DomainError("grid needs at least 4 interior nodes");
    if (nodes.front() < 0.0) throw DomainError("grid nodes must be non-negative");
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (!(nodes[i] > nodes[i - 1])) throw DomainError("grid nodes must be strictly increasing");
    return GridPtr(new RadialGrid(std::move(nodes)));
}

namespace {

double common_spacing(std::span<const double> radii, int n, bool& common) {
    if (radii.empty()) throw DomainError("empty radius schedule");
    for (std::size_t k = 0; k < radii.size(); ++k) {
        if (!(radii[k] > 0.0)) throw DomainError("schedule radii must be positive");
        if (k > 0 && !(radii[k] > radii[k - 1]))
            throw DomainError("radius schedule must be increasing");
    }
    if (n < 4) throw DomainError("grid needs at least 4 interior nodes");
    const double Rmax = radii.back();
    auto commensurate = [&](long N) {
        for (double R : radii) {
            const double x = R * N / Rmax;
            if (std::abs(x - std::round(x)) > 1e-9 * x || std::round(x) < 5) return false;
        }
        return true;
    };
    for (long trial = n + 1; trial <= 2L * (n + 1); ++trial) {
        if (commensurate(trial)) {
            common = true;
            return Rmax / trial;
        }
    }
    common = false;
    return Rmax / (n + 1);
}

std::vector<double> layered_nodes(double R, double h, double h_min, double ratio) {
    if (!(ratio > 1.0)) throw DomainError("layer ratio must be > 1");
    if (!(h_min > 0.0) || h_min >= h) throw DomainError("layer spacing must be in (0, h)");
    std::vector<double> layer;  // distances from R, increasing
    double d = 0.0, s = h_min;
    while (s < h) {
        d += s;
        layer.push_back(d);
        s *= ratio;
    }
    const double start = R - d;  // innermost layer node
    std::vector<double> r;
    for (long i = 0; h * i < start - 0.5 * h; ++i) r.push_back(h * i);
    if (r.empty()) r.push_back(0.0);
    for (auto it = layer.rbegin(); it != layer.rend(); ++it) r.push_back(R - *it);
    r.push_back(R);
    if (r.size() < 6) throw DomainError("layered grid is too coarse");
    return r;
}

}  // namespace

GridPtr RadialGrid::ball_layered(double R, int n, double h_min_fraction, double ratio) {
    if (!(R > 0.0) || !std::isfinite(R)) throw DomainError("ball grid needs R > 0");
    if (n < 4) throw DomainError("ball grid needs at least 4 interior nodes");
    return GridPtr(new RadialGrid(layered_nodes(R, R / (n + 1), h_min_fraction * R, ratio)));
}

std::vector<GridPtr> RadialGrid::nested_layered_balls(std::span<const double> radii, int n,
                                                      double h_min_fraction, double ratio) {
    bool common = false;
    const double h = common_spacing(radii, n, common);
    std::vector<GridPtr> out;
    for (double R : radii) {
        const double hk = common ? h : R / std::max(5L, std::lround(R / h));
        out.push_back(GridPtr(new RadialGrid(layered_nodes(R, hk, h_min_fraction * R, ratio))));
    }
    return out;
}

std::vector<GridPtr> RadialGrid::nested_balls(std::span<const double> radii, int n) {
    bool common = false;
    const double h = common_spacing(radii, n, common);
    std::vector<GridPtr> out;
    out.reserve(radii.size());
    for (double R : radii) {
        const long Nk = std::max<long>(5, std::lround(R / h));
        std::vector<double> r(static_cast<std::size_t>(Nk) + 1);
        const double hk = common ? h : R / Nk;
        for (long i = 0; i < Nk; ++i) r[i] = hk * i;
        r[Nk] = R;
        out.push_back(GridPtr(new RadialGrid(std::move(r))));
    }
    return out;
}

std::size_t RadialGrid::locate(double r) const {
    if (r <= r_.front()) return 0;
    if (r >= r_.back()) return r_.size() - 1;
    return static_cast<std::size_t>(std::upper_bound(r_.begin(), r_.end(), r) - r_.begin()) - 1;
}

RadialField::RadialField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), v_(std::move(values)) {
    if (!grid_) throw DomainError("field without grid");
    if (v_.size() != grid_->size()) throw DomainError("field size does not match grid");
    for (double x : v_)
        if (!std::isfinite(x)) throw DomainError("field values must be finite");
}

RadialField RadialField::constant(GridPtr grid, double c) {
    std::vector<double> v(grid->size(), c);
    return {std::move(grid), std::move(v)};
}

RadialField RadialField::sample(GridPtr grid, const RadialFunction& f) {
    auto v = logman::sample(f, *grid);
    return {std::move(grid), std::move(v)};
}

double RadialField::value_at(double r) const {
    const auto& x = grid_->nodes();
    const double tol = 1e-12 * std::max(1.0, x.back());
    if (r < x.front() - tol || r > x.back() + tol)
        throw DomainError("radius " + std::to_string(r) + " outside the field's grid");
    std::size_t k = grid_->locate(r);
    if (k + 1 >= x.size()) return v_.back();
    const double t = (r - x[k]) / (x[k + 1] - x[k]);
    return (1.0 - t) * v_[k] + t * v_[k + 1];
}

void RadialField::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << "r,value\n";
    char buf[64];
    for (std::size_t i = 0; i < v_.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", grid_->node(i), v_[i]);
        out << buf;
    }
}

RadialField RadialField::read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::vector<double> r, v;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double a = 0.0, b = 0.0;
        if (!(ss >> a >> b)) {
            if (r.empty()) continue;
            throw ConfigError(path + ": malformed row '" + line + "'");
        }
        r.push_back(a);
        v.push_back(b);
    }
    return {RadialGrid::from_nodes(std::move(r)), std::move(v)};
}

namespace {

double cell_integral(const ModelManifold& M, double lo, double hi) {
    if (hi <= lo) return 0.0;
    using boost::math::quadrature::gauss;
    return gauss<double, 7>::integrate([&](double s) { return M.density(s); }, lo, hi);
}

}  // namespace

RadialGeometry::RadialGeometry(const ModelManifold& M, GridPtr grid)
    : M_(M), grid_(std::move(grid)) {
    const auto& r = grid_->nodes();
    const std::size_t n = r.size();
    if (r.back() > M.warping().max_radius())
        throw DomainError("grid extends beyond the tabulated warping range");
    face_.resize(n - 1);
    std::vector<double> mid(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        mid[i] = 0.5 * (r[i] + r[i + 1]);
        face_[i] = M.density(mid[i]) / (r[i + 1] - r[i]);
    }
    vol_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = i == 0 ? r[0] : mid[i - 1];
        const double hi = i + 1 == n ? r[n - 1] : mid[i];
        vol_[i] = cell_integral(M, lo, hi);
    }
}

GeometryPtr make_geometry(const ModelManifold& M, GridPtr grid) {
    return std::make_shared<const RadialGeometry>(M, std::move(grid));
}

RadialOperator::RadialOperator(GeometryPtr geometry, std::vector<double> potential)
    : geo_(std::move(geometry)), c_(std::move(potential)) {
    if (c_.empty()) c_.assign(geo_->grid()->size(), 0.0);
    if (c_.size() != geo_->grid()->size()) throw DomainError("potential size does not match grid");
}

std::vector<double> RadialOperator::apply(std::span<const double> u) const {
    const auto& grid = *geo_->grid();
    const auto& k = geo_->face();
    const auto& V = geo_->volume();
    if (u.size() != grid.size()) throw DomainError("field size does not match grid");
    std::vector<double> out(u.size(), 0.0);
    for (std::size_t i = grid.first_unknown(); i <= grid.last_unknown(); ++i) {
        double flux = k[i] * (u[i + 1] - u[i]);
        if (i > 0) flux -= k[i - 1] * (u[i] - u[i - 1]);
        out[i] = flux / V[i] + c_[i] * u[i];
    }
    return out;
}

RadialOperator assemble(const ModelManifold& M, GridPtr grid, const RadialField& potential) {
    if (potential.grid() != grid && potential.grid()->nodes() != grid->nodes())
        throw DomainError("potential lives on a different grid");
    return {make_geometry(M, std::move(grid)), potential.values()};
}

RadialOperator assemble(GeometryPtr geometry, std::vector<double> potential) {
    return {std::move(geometry), std::move(potential)};
}

std::vector<double> solve_dirichlet(const RadialOperator& op, std::span<const double> f,
                                    double inner_value, double outer_value) {
    const auto& geo = op.geometry();
    const auto& grid = *geo.grid();
    const auto& k = geo.face();
    const auto& V = geo.volume();
    const auto& c = op.potential();
    if (f.size() != grid.size()) throw DomainError("right-hand side size does not match grid");

    const std::size_t i0 = grid.first_unknown(), i1 = grid.last_unknown();
    const std::size_t n = i1 - i0 + 1;
    std::vector<double> sub(n), diag(n), sup(n), rhs(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t i = i0 + j;
        const double kl = i > 0 ? k[i - 1] : 0.0;
        sub[j] = kl;
        sup[j] = k[i];
        diag[j] = -(kl + k[i]) + c[i] * V[i];
        rhs[j] = f[i] * V[i];
    }
    if (!grid.has_pole()) rhs[0] -= sub[0] * inner_value;
    rhs[n - 1] -= sup[n - 1] * outer_value;

    // Thomas elimination.
    std::vector<double> cp(n), dp(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double lower = j > 0 ? sub[j] : 0.0;
        const double pivot = diag[j] - (j > 0 ? lower * cp[j - 1] : 0.0);
        const double scale = std::abs(sub[j]) + std::abs(diag[j]) + std::abs(sup[j]);
        if (!(std::abs(pivot) >= 1e-14 * scale))
            throw NumericalError("singular radial system (pivot " + std::to_string(pivot) +
                                 " at node " + std::to_string(i0 + j) + ")");
        cp[j] = sup[j] / pivot;
        dp[j] = (rhs[j] - (j > 0 ? lower * dp[j - 1] : 0.0)) / pivot;
    }
    std::vector<double> u(grid.size());
    u[i0 + n - 1] = dp[n - 1];
    for (std::size_t j = n - 1; j-- > 0;) u[i0 + j] = dp[j] - cp[j] * u[i0 + j + 1];
    if (!grid.has_pole()) u.front() = inner_value;
    u.back() = outer_value;
    return u;
}

RadialField solve_linear(const RadialOperator& op, const RadialField& rhs, double boundary) {
    return solve_linear(op, rhs, boundary, boundary);
}

RadialField solve_linear(const RadialOperator& op, const RadialField& rhs, double inner_value,
                         double outer_value) {
    auto u = solve_dirichlet(op, rhs.values(), inner_value, outer_value);
    return {op.geometry().grid(), std::move(u)};
}

namespace {

double checked_pow(double x, double p) {
    if (p == 1.0) return x;
    if (x < 0.0 && p != std::floor(p))
        throw DomainError("negative field raised to a fractional power");
    return std::pow(x, p);
}

}  // namespace

double integrate_ball(const ModelManifold& M, const RadialField& u, double weight_exponent,
                      double R) {
    const auto& r = u.grid()->nodes();
    if (R < r.front() || R > r.back() * (1 + 1e-12))
        throw DomainError("integration radius outside the field's grid");
    using boost::math::quadrature::gauss;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < r.size() && r[i] < R; ++i) {
        const double lo = r[i], hi = std::min(r[i + 1], R);
        const double h = r[i + 1] - r[i];
        const double u0 = u[i], u1 = u[i + 1];
        if (weight_exponent != std::floor(weight_exponent) && (u0 < 0.0 || u1 < 0.0))
            throw DomainError("negative field raised to a fractional power");
        total += gauss<double, 4>::integrate(
            [&](double s) {
                const double t = (s - r[i]) / h;
                return checked_pow((1 - t) * u0 + t * u1, weight_exponent) * M.density(s);
            },
            lo, hi);
    }
    return M.omega() * total;
}

double integrate_sphere(const ModelManifold& M, const RadialField& u, double r,
                        double weight_exponent) {
    return M.omega() * M.density(r) * checked_pow(u.value_at(r), weight_exponent);
}

double one_sided_derivative(const RadialField& u, std::size_t i, int direction) {
    const auto& r = u.grid()->nodes();
    if (direction > 0) {
        if (i + 2 >= r.size()) throw DomainError("one-sided stencil leaves the grid");
        const double h1 = r[i + 1] - r[i], h2 = r[i + 2] - r[i + 1];
        return -(2 * h1 + h2) / (h1 * (h1 + h2)) * u[i] + (h1 + h2) / (h1 * h2) * u[i + 1] -
               h1 / (h2 * (h1 + h2)) * u[i + 2];
    }
    if (i < 2) throw DomainError("one-sided stencil leaves the grid");
    const double h1 = r[i] - r[i - 1], h2 = r[i - 1] - r[i - 2];
    return (2 * h1 + h2) / (h1 * (h1 + h2)) * u[i] - (h1 + h2) / (h1 * h2) * u[i - 1] +
           h1 / (h2 * (h1 + h2)) * u[i - 2];
}

std::vector<double> gradient(const RadialField& u) {
    const auto& r = u.grid()->nodes();
    const std::size_t n = r.size();
    std::vector<double> d(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hm = r[i] - r[i - 1], hp = r[i + 1] - r[i];
        d[i] = -hp / (hm * (hm + hp)) * u[i - 1] + (hp - hm) / (hm * hp) * u[i] +
               hm / (hp * (hm + hp)) * u[i + 1];
    }
    d[0] = u.grid()->has_pole() ? 0.0 : one_sided_derivative(u, 0, +1);
    d[n - 1] = one_sided_derivative(u, n - 1, -1);
    return d;
}

LogisticProblem::LogisticProblem(ModelManifold manifold, RadialFunction a_, RadialFunction b_,
                                 double sigma_)
    : M(std::move(manifold)), a(std::move(a_)), b(std::move(b_)), sigma(sigma_) {
    if (!(sigma > 1.0) || !std::isfinite(sigma)) throw DomainError("logistic exponent must be > 1");
    if (!a || !b) throw DomainError("logistic coefficients must be set");
}

std::vector<double> sample(const RadialFunction& f, const RadialGrid& grid) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = f(grid.node(i));
        if (!std::isfinite(v[i]))
            throw DomainError("coefficient is not finite at r = " + std::to_string(grid.node(i)));
    }
    return v;
}

std::vector<double> residual_field(const LogisticProblem& problem, const GeometryPtr& geo,
                                   std::span<const double> u) {
    const auto& grid = *geo->grid();
    auto a = sample(problem.a, grid);
    const auto b = sample(problem.b, grid);
    RadialOperator op(geo, std::move(a));
    auto out = op.apply(u);
    for (std::size_t i = grid.first_unknown(); i <= grid.last_unknown(); ++i)
        out[i] -= b[i] * std::pow(std::max(u[i], 0.0), problem.sigma);
    return out;
}

double residual(const LogisticProblem& problem, const RadialField& u) {
    const auto res = residual_field(problem, make_geometry(problem.M, u.grid()), u.values());
    double worst = 0.0;
    for (double x : res) worst = std::max(worst, std::abs(x));
    return worst;
}

}  // namespace logman
