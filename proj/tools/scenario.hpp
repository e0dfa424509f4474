#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "logman/model_manifold.hpp"
#include "logman/nonexistence.hpp"
#include "logman/radial_ode.hpp"

namespace logman::cli {

struct ManifoldSpec {
    std::string type = "euclidean";  ///< euclidean, hyperbolic, power, table
    int dimension = 3;
    double B = 1.0;         ///< hyperbolic curvature scale
    double exponent = 1.0;  ///< power family g = r^exponent
    std::string table;      ///< CSV "r,g" for type = table
};

/// Either an expression over r or a CSV table "r,value".
struct Coefficient {
    std::string expression;
    std::string table;
    bool given() const { return !expression.empty() || !table.empty(); }
};

struct SolverSettings {
    double R = 1.0;
    double R_max = 0.0;  ///< schedule R_max/8, /4, /2, R_max when R_schedule is empty
    std::vector<double> R_schedule;
    int mesh = 2000;
    double tol = 1e-6;
    double mu = 0.0;  ///< multiplier of a in Delta + mu a
    std::vector<double> mu_grid;
    double boundary = 1.0;  ///< Dirichlet value for solve and for the a-priori estimate
    double sub = 0.0;
    double super = 0.0;     ///< 0 selects default_super_value
    double T_o = 1.0;
    double outer = 0.0;     ///< outer radius of the glued sub-solution, 0 = R + 2 T_o
    double range_lo = 10.0;
    double range_hi = 1000.0;
    std::string eigen = "dirichlet";  ///< dirichlet or principal
    std::string phi;                  ///< "poisson" or an expression
    bool solve = false;               ///< exists: continue to the maximal solution
    bool cross_check = false;         ///< compare: run blow-up limits too
    std::vector<double> radii;        ///< green: sample radii
};

struct Scenario {
    std::string name;
    std::string command;
    ManifoldSpec manifold;
    Coefficient a, b, rho;
    double sigma = 2.0;
    SolverSettings solver;
    std::string theorem = "3.3";
    NonexistenceParams params;
    double lambda = 1.0;
    double k = 1.0;
    /// Named constants in file order; each value is an expression over the
    /// earlier ones, m, B and the params.
    std::vector<std::pair<std::string, std::string>> constants;
    std::filesystem::path base_dir = ".";
    std::set<std::string> given;  ///< keys set explicitly

    bool has(const std::string& key) const { return given.count(key) > 0; }
};

const std::vector<std::string>& command_names();

/// Reads a scenario file. All problems are collected and reported together
/// in one ConfigError, one "line N: ..." entry per problem.
Scenario parse_scenario(const std::filesystem::path& path);
Scenario parse_scenario_text(const std::string& text, const std::filesystem::path& base_dir = ".");

/// Sets a numeric field by its config key (e.g. "params.lambda"). Throws
/// ConfigError when the key is unknown or not a scalar.
void set_scalar(Scenario& s, const std::string& key, double value);

/// Manifold, coefficients and constants compiled from a scenario.
struct Model {
    ModelManifold M;
    RadialFunction a, b, rho;
    std::map<std::string, double> symbols;
};

Model build_model(const Scenario& s);

}  // namespace logman::cli
