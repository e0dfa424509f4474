#include "scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <variant>

#include "expression.hpp"
#include "logman/error.hpp"

namespace logman::cli {

namespace {

using Target = std::variant<double*, int*, bool*, std::string*, std::vector<double>*>;

std::vector<std::pair<std::string, Target>> bindings(Scenario& s) {
    auto& v = s.solver;
    auto& p = s.params;
    return {
        {"name", &s.name},
        {"command", &s.command},
        {"manifold.type", &s.manifold.type},
        {"manifold.dimension", &s.manifold.dimension},
        {"manifold.B", &s.manifold.B},
        {"manifold.exponent", &s.manifold.exponent},
        {"manifold.table", &s.manifold.table},
        {"coefficients.a", &s.a.expression},
        {"coefficients.a_table", &s.a.table},
        {"coefficients.b", &s.b.expression},
        {"coefficients.b_table", &s.b.table},
        {"coefficients.rho", &s.rho.expression},
        {"coefficients.rho_table", &s.rho.table},
        {"sigma", &s.sigma},
        {"theorem", &s.theorem},
        {"solver.R", &v.R},
        {"solver.R_max", &v.R_max},
        {"solver.R_schedule", &v.R_schedule},
        {"solver.mesh", &v.mesh},
        {"solver.tol", &v.tol},
        {"solver.mu", &v.mu},
        {"solver.mu_grid", &v.mu_grid},
        {"solver.boundary", &v.boundary},
        {"solver.sub", &v.sub},
        {"solver.super", &v.super},
        {"solver.T_o", &v.T_o},
        {"solver.outer", &v.outer},
        {"solver.range_lo", &v.range_lo},
        {"solver.range_hi", &v.range_hi},
        {"solver.eigen", &v.eigen},
        {"solver.phi", &v.phi},
        {"solver.solve", &v.solve},
        {"solver.cross_check", &v.cross_check},
        {"solver.radii", &v.radii},
        {"params.H", &p.H},
        {"params.K", &p.K},
        {"params.A", &p.A},
        {"params.beta", &p.beta},
        {"params.p", &p.p},
        {"params.mu", &p.mu},
        {"params.delta", &p.delta},
        {"params.q", &p.q},
        {"params.lambda", &s.lambda},
        {"params.k", &s.k},
    };
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool to_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

struct Entry {
    std::string key, value;
    int line = 0;
};

// Strips a '#' comment that is not inside double quotes.
std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

std::string assign(const Target& target, const std::string& raw) {
    std::string value = raw;
    const bool quoted = value.size() >= 2 && value.front() == '"' && value.back() == '"';
    if (quoted) value = value.substr(1, value.size() - 2);
    return std::visit(
        [&](auto* t) -> std::string {
            using T = std::remove_pointer_t<decltype(t)>;
            if constexpr (std::is_same_v<T, std::string>) {
                *t = value;
            } else if constexpr (std::is_same_v<T, double>) {
                if (quoted || !to_double(value, *t)) return "expected a number, got '" + raw + "'";
            } else if constexpr (std::is_same_v<T, int>) {
                double d = 0.0;
                if (quoted || !to_double(value, d) || d != static_cast<int>(d))
                    return "expected an integer, got '" + raw + "'";
                *t = static_cast<int>(d);
            } else if constexpr (std::is_same_v<T, bool>) {
                if (value == "true") *t = true;
                else if (value == "false") *t = false;
                else return "expected true or false, got '" + raw + "'";
            } else {
                std::string body = value;
                if (!body.empty() && body.front() == '[') {
                    if (body.back() != ']') return "unterminated list";
                    body = body.substr(1, body.size() - 2);
                }
                t->clear();
                std::stringstream ss(body);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    double d = 0.0;
                    if (trim(item).empty() && t->empty() && ss.eof()) break;
                    if (!to_double(trim(item), d)) return "bad list entry '" + trim(item) + "'";
                    t->push_back(d);
                }
            }
            return {};
        },
        target);
}

std::map<std::string, double> base_symbols(const Scenario& s) {
    const auto& p = s.params;
    return {{"m", s.manifold.dimension}, {"B", s.manifold.B},   {"sigma", s.sigma}, {"H", p.H},
            {"K", p.K},                  {"A", p.A},            {"beta", p.beta},   {"p", p.p},
            {"mu", p.mu},                {"delta", p.delta},    {"q", p.q},         {"lambda", s.lambda},
            {"k", s.k}};
}

// Evaluates the constants in order; problems go to errors when given.
std::map<std::string, double> symbols(const Scenario& s, std::vector<std::string>* errors) {
    auto sym = base_symbols(s);
    for (const auto& [name, text] : s.constants) {
        try {
            sym[name] = Expression::parse(text, sym)(0.0);
        } catch (const ConfigError& e) {
            if (!errors) throw;
            errors->push_back("constants." + name + ": " + e.what());
        }
    }
    return sym;
}

void validate(const Scenario& s, const std::map<std::string, int>& lines, std::vector<std::string>& errors) {
    auto err = [&](const std::string& key, const std::string& what) {
        const auto it = lines.find(key);
        errors.push_back((it != lines.end() ? "line " + std::to_string(it->second) + ": " : std::string()) + key +
                         ": " + what);
    };
    const auto& cmds = command_names();
    if (!s.command.empty() && std::find(cmds.begin(), cmds.end(), s.command) == cmds.end())
        err("command", "unknown command '" + s.command + "'");

    const auto& type = s.manifold.type;
    if (type != "euclidean" && type != "hyperbolic" && type != "power" && type != "table")
        err("manifold.type", "unknown manifold type '" + type + "'");
    if (s.manifold.dimension < 2) err("manifold.dimension", "must be >= 2");
    if (type == "hyperbolic" && !(s.manifold.B > 0.0)) err("manifold.B", "must be > 0");
    if (type == "power" && !(s.manifold.exponent >= 1.0)) err("manifold.exponent", "must be >= 1");
    if (type == "table") {
        if (s.manifold.table.empty()) err("manifold.table", "required for type table");
        else if (!std::filesystem::exists(s.base_dir / s.manifold.table))
            err("manifold.table", "file '" + s.manifold.table + "' does not exist");
    }

    if (s.solver.mesh < 10) err("solver.mesh", "must be >= 10");
    if (!(s.solver.tol > 0.0)) err("solver.tol", "must be > 0");
    if (!(s.sigma > 1.0)) err("sigma", "must be > 1");
    if (!(s.solver.R > 0.0)) err("solver.R", "must be > 0");
    if (!(s.solver.T_o > 0.0)) err("solver.T_o", "must be > 0");
    if (s.solver.R_max < 0.0) err("solver.R_max", "must be >= 0");
    if (!(s.solver.range_lo > 1.0 && s.solver.range_hi > s.solver.range_lo))
        err("solver.range_lo", "need 1 < range_lo < range_hi");
    for (std::size_t i = 0; i < s.solver.R_schedule.size(); ++i)
        if (!(s.solver.R_schedule[i] > (i ? s.solver.R_schedule[i - 1] : 0.0))) {
            err("solver.R_schedule", "must be positive and strictly increasing");
            break;
        }
    for (double r : s.solver.radii)
        if (!(r > 0.0)) {
            err("solver.radii", "must be positive");
            break;
        }
    if (s.solver.eigen != "dirichlet" && s.solver.eigen != "principal")
        err("solver.eigen", "expected dirichlet or principal, got '" + s.solver.eigen + "'");
    try {
        theorem_from_string(s.theorem);
    } catch (const ConfigError& e) {
        err("theorem", e.what());
    }

    std::vector<std::string> sym_errors;
    const auto sym = symbols(s, &sym_errors);
    for (const auto& e : sym_errors) {
        const auto key = e.substr(0, e.find(':'));
        err(key, e.substr(key.size() + 2));
    }
    const std::pair<const char*, const Coefficient*> coeffs[] = {{"a", &s.a}, {"b", &s.b}, {"rho", &s.rho}};
    for (const auto& [name, c] : coeffs) {
        const std::string key = std::string("coefficients.") + name;
        if (!c->expression.empty() && !c->table.empty()) err(key, "give an expression or a table, not both");
        if (!c->expression.empty()) {
            try {
                Expression::parse(c->expression, sym);
            } catch (const ConfigError& e) {
                err(key, e.what());
            }
        }
        if (!c->table.empty() && !std::filesystem::exists(s.base_dir / c->table))
            err(key + "_table", "file '" + c->table + "' does not exist");
    }
    if (!s.solver.phi.empty() && s.solver.phi != "poisson") {
        try {
            Expression::parse(s.solver.phi, sym);
        } catch (const ConfigError& e) {
            err("solver.phi", e.what());
        }
    }
}

RadialFunction compile(const Coefficient& c, const std::string& fallback, const std::filesystem::path& base,
                       const std::map<std::string, double>& sym) {
    if (!c.table.empty()) {
        auto field = std::make_shared<RadialField>(RadialField::read_csv((base / c.table).string()));
        return [field](double r) { return field->value_at(r); };
    }
    const auto e = Expression::parse(c.expression.empty() ? fallback : c.expression, sym);
    return [e](double r) { return e(r); };
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"eigen",  "lambda-star", "duality", "solve",    "blowup",
                                                "maximal", "subsolution", "exists",  "nonexist", "compare",
                                                "green",  "poisson",     "sweep"};
    return names;
}

Scenario parse_scenario_text(const std::string& text, const std::filesystem::path& base_dir) {
    Scenario s;
    s.base_dir = base_dir;
    std::vector<std::string> errors;
    std::map<std::string, int> lines;
    auto table = bindings(s);

    std::stringstream in(text);
    std::string raw;
    for (int line = 1; std::getline(in, raw); ++line) {
        const std::string body = trim(strip_comment(raw));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        const std::string where = "line " + std::to_string(line) + ": ";
        if (eq == std::string::npos) {
            errors.push_back(where + "expected 'key = value'");
            continue;
        }
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty() || !std::all_of(key.begin(), key.end(), [](char c) {
                return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
            })) {
            errors.push_back(where + "bad key '" + key + "'");
            continue;
        }
        if (value.empty()) {
            errors.push_back(where + key + ": missing value");
            continue;
        }
        if (lines.count(key)) {
            errors.push_back(where + key + ": already set on line " + std::to_string(lines[key]));
            continue;
        }
        lines[key] = line;
        if (key.rfind("constants.", 0) == 0) {
            const std::string name = key.substr(10);
            std::string v = value;
            if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
            s.constants.emplace_back(name, v);
            s.given.insert(key);
            continue;
        }
        const auto it = std::find_if(table.begin(), table.end(), [&](const auto& b) { return b.first == key; });
        if (it == table.end()) {
            errors.push_back(where + "unknown key '" + key + "'");
            continue;
        }
        if (const auto e = assign(it->second, value); !e.empty()) errors.push_back(where + key + ": " + e);
        else s.given.insert(key);
    }
    validate(s, lines, errors);
    if (!errors.empty()) {
        std::string msg;
        for (const auto& e : errors) msg += (msg.empty() ? "" : "\n") + e;
        throw ConfigError(msg);
    }
    return s;
}

Scenario parse_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read scenario '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    auto s = parse_scenario_text(ss.str(), path.parent_path().empty() ? "." : path.parent_path());
    if (s.name.empty()) s.name = path.stem().string();
    return s;
}

void set_scalar(Scenario& s, const std::string& key, double value) {
    for (auto& [k, target] : bindings(s)) {
        if (k != key) continue;
        if (auto* d = std::get_if<double*>(&target)) {
            **d = value;
        } else if (auto* i = std::get_if<int*>(&target)) {
            if (value != static_cast<int>(value)) throw ConfigError(key + " takes integers");
            **i = static_cast<int>(value);
        } else {
            throw ConfigError(key + " is not a scalar");
        }
        s.given.insert(key);
        return;
    }
    throw ConfigError("unknown scalar '" + key + "'");
}

Model build_model(const Scenario& s) {
    const auto sym = symbols(s, nullptr);
    const auto& ms = s.manifold;
    WarpingFunction w = WarpingFunction::euclidean();
    if (ms.type == "hyperbolic") w = WarpingFunction::hyperbolic(ms.B);
    else if (ms.type == "power") w = WarpingFunction::power(ms.exponent);
    else if (ms.type == "table") w = WarpingFunction::from_csv((s.base_dir / ms.table).string());
    else if (ms.type != "euclidean") throw ConfigError("unknown manifold type '" + ms.type + "'");
    Model out{ModelManifold(ms.dimension, w), {}, {}, {}, sym};
    out.a = compile(s.a, "0", s.base_dir, sym);
    out.b = compile(s.b, "1", s.base_dir, sym);
    if (s.rho.given()) out.rho = compile(s.rho, "0", s.base_dir, sym);
    return out;
}

}  // namespace logman::cli
