#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "logman/model_manifold.hpp"

namespace logman {

using RadialFunction = std::function<double(double)>;

enum class Grading { uniform, geometric };

class RadialGrid;
using GridPtr = std::shared_ptr<const RadialGrid>;

/// Nodes of [r_in, r_out]. A ball (r_in = 0) has a pole node r_0 = 0 that is
/// an unknown; the outer node always carries Dirichlet data, and so does the
/// inner node of an annulus.
class RadialGrid {
public:
    /// n interior nodes in (0, R). Geometric grading uses spacings
    /// h_k = h_1 q^{k-1}, fine near the pole.
    static GridPtr ball(double R, int n, Grading grading = Grading::uniform, double ratio = 1.0);
    /// n interior nodes in (r_in, r_out), uniform.
    static GridPtr annulus(double r_in, double r_out, int n);
    /// Arbitrary strictly increasing nodes; a ball iff nodes.front() == 0.
    static GridPtr from_nodes(std::vector<double> nodes);

    /// Balls of radii R_k sharing one spacing h, so every grid is a prefix of
    /// the largest one. At least n + 1 cells on the largest ball.
    static std::vector<GridPtr> nested_balls(std::span<const double> radii, int n);

    /// Uniform spacing R/(n+1) inside, then a geometric layer toward R whose
    /// spacing shrinks by 1/ratio down to h_min_fraction * R. Resolves the
    /// boundary layer of solutions with very large boundary data.
    static GridPtr ball_layered(double R, int n, double h_min_fraction = 1e-10, double ratio = 1.1);
    /// As nested_balls, with a boundary layer at each R_k; the uniform nodes
    /// i*h are shared by all grids.
    static std::vector<GridPtr> nested_layered_balls(std::span<const double> radii, int n,
                                                     double h_min_fraction = 1e-10, double ratio = 1.1);

    const std::vector<double>& nodes() const noexcept { return r_; }
    double node(std::size_t i) const { return r_[i]; }
    std::size_t size() const noexcept { return r_.size(); }
    bool has_pole() const noexcept { return r_.front() == 0.0; }
    double inner() const noexcept { return r_.front(); }
    double outer() const noexcept { return r_.back(); }

    /// Index range [first, last] of the unknowns.
    std::size_t first_unknown() const noexcept { return has_pole() ? 0 : 1; }
    std::size_t last_unknown() const noexcept { return r_.size() - 2; }
    std::size_t unknown_count() const noexcept { return last_unknown() - first_unknown() + 1; }

    /// Index of the last node with r_i <= r (clamped to the grid).
    std::size_t locate(double r) const;

private:
    explicit RadialGrid(std::vector<double> r) : r_(std::move(r)) {}
    std::vector<double> r_;
};

/// Nodal profile on a grid, boundary nodes included.
class RadialField {
public:
    RadialField() = default;
    RadialField(GridPtr grid, std::vector<double> values);

    static RadialField constant(GridPtr grid, double c);
    static RadialField sample(GridPtr grid, const RadialFunction& f);

    const GridPtr& grid() const noexcept { return grid_; }
    const std::vector<double>& values() const noexcept { return v_; }
    std::vector<double>& values() noexcept { return v_; }
    double operator[](std::size_t i) const { return v_[i]; }
    double& operator[](std::size_t i) { return v_[i]; }
    std::size_t size() const noexcept { return v_.size(); }
    double r(std::size_t i) const { return grid_->node(i); }

    /// Piecewise-linear interpolation; throws DomainError outside the grid.
    double value_at(double r) const;

    /// CSV with header "r,value", 17 significant digits.
    void write_csv(const std::string& path) const;
    static RadialField read_csv(const std::string& path);

private:
    GridPtr grid_;
    std::vector<double> v_;
};

/// Conservative three-point discretization of the radial Laplacian
///   (Delta_h u)_i = [k_{i+1/2}(u_{i+1}-u_i) - k_{i-1/2}(u_i-u_{i-1})] / V_i
/// with face weights k = g(r_face)^{m-1}/h and exact dual-cell volumes
/// V_i = int g^{m-1} over [r_{i-1/2}, r_{i+1/2}] (pole cell [0, r_{1/2}]).
class RadialGeometry {
public:
    RadialGeometry(const ModelManifold& M, GridPtr grid);

    const ModelManifold& manifold() const noexcept { return M_; }
    const GridPtr& grid() const noexcept { return grid_; }
    /// face[i] is the weight of the face between nodes i and i+1.
    const std::vector<double>& face() const noexcept { return face_; }
    /// Dual-cell volume of node i (half cells at the endpoints).
    const std::vector<double>& volume() const noexcept { return vol_; }

private:
    ModelManifold M_;
    GridPtr grid_;
    std::vector<double> face_, vol_;
};

using GeometryPtr = std::shared_ptr<const RadialGeometry>;

GeometryPtr make_geometry(const ModelManifold& M, GridPtr grid);

/// Delta_h + c(r) on the unknowns of a grid.
class RadialOperator {
public:
    RadialOperator(GeometryPtr geometry, std::vector<double> potential);

    const RadialGeometry& geometry() const noexcept { return *geo_; }
    const GeometryPtr& geometry_ptr() const noexcept { return geo_; }
    const std::vector<double>& potential() const noexcept { return c_; }

    /// (Delta_h + c)u at every unknown node; boundary entries are 0.
    std::vector<double> apply(std::span<const double> u) const;

private:
    GeometryPtr geo_;
    std::vector<double> c_;
};

RadialOperator assemble(const ModelManifold& M, GridPtr grid, const RadialField& potential);
RadialOperator assemble(GeometryPtr geometry, std::vector<double> potential);

/// Solves (Delta_h + c)u = f at the unknowns with Dirichlet data at the
/// boundary node(s). Throws NumericalError when a pivot falls below 1e-14
/// of the row scale.
std::vector<double> solve_dirichlet(const RadialOperator& op, std::span<const double> f,
                                    double inner_value, double outer_value);

RadialField solve_linear(const RadialOperator& op, const RadialField& rhs, double boundary);
RadialField solve_linear(const RadialOperator& op, const RadialField& rhs, double inner_value,
                         double outer_value);

/// omega * int_0^R u^p g^{m-1} dr of the piecewise-linear interpolant of u
/// (Gauss-Legendre on each cell). R must lie on the field's grid.
double integrate_ball(const ModelManifold& M, const RadialField& u, double weight_exponent, double R);

/// omega * g(r)^{m-1} u(r)^p.
double integrate_sphere(const ModelManifold& M, const RadialField& u, double r,
                        double weight_exponent = 1.0);

/// Three-point derivative on a nonuniform grid: central inside, 0 at a pole,
/// one-sided second order at the other endpoints.
std::vector<double> gradient(const RadialField& u);

/// One-sided second-order derivative at node i looking right (+1) or left (-1).
double one_sided_derivative(const RadialField& u, std::size_t i, int direction);

struct LogisticProblem {
    LogisticProblem(ModelManifold manifold, RadialFunction a, RadialFunction b, double sigma);

    ModelManifold M;
    RadialFunction a;
    RadialFunction b;
    double sigma;
};

/// Delta_h u + a u - b u^sigma at every unknown node (boundary entries 0).
std::vector<double> residual_field(const LogisticProblem& problem, const GeometryPtr& geo,
                                   std::span<const double> u);

/// Sup norm of residual_field.
double residual(const LogisticProblem& problem, const RadialField& u);

/// a(r_i) at every node.
std::vector<double> sample(const RadialFunction& f, const RadialGrid& grid);

}  // namespace logman
