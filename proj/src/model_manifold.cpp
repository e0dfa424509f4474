#include "logman/model_manifold.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "logman/error.hpp"
#include "logman/fitting.hpp"

namespace logman {

std::string to_string(WarpingFamily family) {
    switch (family) {
        case WarpingFamily::euclidean: return "euclidean";
        case WarpingFamily::hyperbolic: return "hyperbolic";
        case WarpingFamily::power: return "power";
        case WarpingFamily::tabulated: return "tabulated";
    }
    return "unknown";
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::holds: return "holds";
        case Verdict::fails: return "fails";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

WarpingFunction WarpingFunction::euclidean() { return {}; }

WarpingFunction WarpingFunction::hyperbolic(double curvature_scale) {
    if (!(curvature_scale > 0.0) || !std::isfinite(curvature_scale))
        throw DomainError("hyperbolic warping needs B > 0");
    WarpingFunction w;
    w.family_ = WarpingFamily::hyperbolic;
    w.param_ = curvature_scale;
    w.sqrt_param_ = std::sqrt(curvature_scale);
    return w;
}

WarpingFunction WarpingFunction::power(double exponent) {
    if (!(exponent >= 1.0) || !std::isfinite(exponent))
        throw DomainError("power warping needs B' >= 1");
    WarpingFunction w;
    w.family_ = WarpingFamily::power;
    w.param_ = exponent;
    return w;
}

namespace {

// Fritsch-Carlson slopes for a monotone piecewise cubic Hermite interpolant.
std::vector<double> monotone_slopes(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> h(n - 1), delta(n - 1), d(n, 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        h[k] = x[k + 1] - x[k];
        delta[k] = (y[k + 1] - y[k]) / h[k];
    }
    if (n == 2) {
        d[0] = d[1] = delta[0];
        return d;
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (delta[k - 1] * delta[k] <= 0.0) {
            d[k] = 0.0;
        } else {
            const double w1 = 2.0 * h[k] + h[k - 1];
            const double w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (s * d0 <= 0.0) s = 0.0;
        else if (d0 * d1 <= 0.0 && std::abs(s) > std::abs(3.0 * d0)) s = 3.0 * d0;
        return s;
    };
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    return d;
}

}  // namespace

WarpingFunction WarpingFunction::tabulated(std::vector<double> r, std::vector<double> g) {
    if (r.size() != g.size() || r.size() < 3)
        throw DomainError("tabulated warping needs at least 3 (r, g) samples");
    if (r.front() != 0.0 || g.front() != 0.0)
        throw DomainError("tabulated warping must start at (0, 0)");
    for (std::size_t i = 1; i < r.size(); ++i) {
        if (!(r[i] > r[i - 1])) throw DomainError("tabulated radii must be strictly increasing");
        if (!(g[i] > 0.0)) throw DomainError("tabulated g must be positive for r > 0");
        if (g[i] < g[i - 1]) throw DomainError("tabulated g must be non-decreasing");
    }
    WarpingFunction w;
    w.family_ = WarpingFamily::tabulated;
    w.slope_ = monotone_slopes(r, g);
    w.r_ = std::move(r);
    w.g_ = std::move(g);
    return w;
}

WarpingFunction WarpingFunction::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open warping table '" + path + "'");
    std::vector<double> r, g;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double a = 0.0, b = 0.0;
        if (!(ss >> a >> b)) {
            if (r.empty()) continue;  // header
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected two numbers");
        }
        r.push_back(a);
        g.push_back(b);
    }
    return tabulated(std::move(r), std::move(g));
}

double WarpingFunction::value(double r) const {
    switch (family_) {
        case WarpingFamily::euclidean: return r;
        case WarpingFamily::hyperbolic: return std::sinh(sqrt_param_ * r) / sqrt_param_;
        case WarpingFamily::power: return std::pow(r, param_);
        case WarpingFamily::tabulated: break;
    }
    if (r < 0.0 || r > r_.back())
        throw DomainError("radius " + std::to_string(r) + " outside tabulated warping range");
    std::size_t k = static_cast<std::size_t>(std::upper_bound(r_.begin(), r_.end(), r) - r_.begin());
    k = std::clamp<std::size_t>(k, 1, r_.size() - 1) - 1;
    const double h = r_[k + 1] - r_[k];
    const double t = (r - r_[k]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * g_[k] + (t3 - 2 * t2 + t) * h * slope_[k] +
           (-2 * t3 + 3 * t2) * g_[k + 1] + (t3 - t2) * h * slope_[k + 1];
}

double WarpingFunction::derivative(double r) const {
    switch (family_) {
        case WarpingFamily::euclidean: return 1.0;
        case WarpingFamily::hyperbolic: return std::cosh(sqrt_param_ * r);
        case WarpingFamily::power: return param_ * std::pow(r, param_ - 1.0);
        case WarpingFamily::tabulated: break;
    }
    if (r < 0.0 || r > r_.back())
        throw DomainError("radius " + std::to_string(r) + " outside tabulated warping range");
    std::size_t k = static_cast<std::size_t>(std::upper_bound(r_.begin(), r_.end(), r) - r_.begin());
    k = std::clamp<std::size_t>(k, 1, r_.size() - 1) - 1;
    const double h = r_[k + 1] - r_[k];
    const double t = (r - r_[k]) / h;
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * g_[k] + (-6 * t2 + 6 * t) * g_[k + 1]) / h +
           (3 * t2 - 4 * t + 1) * slope_[k] + (3 * t2 - 2 * t) * slope_[k + 1];
}

double WarpingFunction::pole_order() const {
    return family_ == WarpingFamily::power ? param_ : 1.0;
}

double WarpingFunction::max_radius() const {
    return family_ == WarpingFamily::tabulated ? r_.back() : INFINITY;
}

double unit_sphere_area(int m) {
    const double half = 0.5 * m;
    return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

ModelManifold::ModelManifold(int dimension, WarpingFunction warping)
    : m_(dimension), warping_(std::move(warping)), omega_(0.0) {
    if (m_ < 2) throw DomainError("model manifold dimension must be >= 2");
    omega_ = unit_sphere_area(m_);
}

double ModelManifold::density(double r) const {
    return std::pow(warping_.value(r), m_ - 1);
}

double warp_coefficient(const ModelManifold& M, double r) {
    if (!(r > 0.0)) throw DomainError("warp_coefficient needs r > 0");
    return (M.dimension() - 1) * M.dg(r) / M.g(r);
}

double ball_volume(const ModelManifold& M, double r) {
    if (r < 0.0) throw DomainError("ball_volume needs r >= 0");
    if (r == 0.0) return 0.0;
    using boost::math::quadrature::gauss_kronrod;
    double err = 0.0;
    const double I = gauss_kronrod<double, 31>::integrate(
        [&](double s) { return M.density(s); }, 0.0, r, 20, 1e-13, &err);
    return M.omega() * I;
}

double sphere_area(const ModelManifold& M, double r) {
    if (r < 0.0) throw DomainError("sphere_area needs r >= 0");
    return M.omega() * M.density(r);
}

namespace {

std::vector<double> geometric_samples(double lo, double hi, int count) {
    std::vector<double> r(count);
    const double q = std::log(hi / lo) / (count - 1);
    for (int i = 0; i < count; ++i) r[i] = lo * std::exp(q * i);
    return r;
}

}  // namespace

GrowthClassification classify_growth(const ModelManifold& M, double exponent_target,
                                     bool with_log_factor, RadiusRange range,
                                     double slack_fraction) {
    if (!(range.lo > 0.0) || !(range.hi >= 10.0 * range.lo))
        throw DomainError("classify_growth needs a radius range spanning at least one decade");
    if (with_log_factor && !(range.lo > 1.0))
        throw DomainError("classify_growth with a log factor needs r > 1");

    GrowthClassification out;
    out.mode = GrowthMode::power_law;
    out.target = exponent_target;
    out.slack = slack_fraction * std::abs(exponent_target);
    out.with_log_factor = with_log_factor;

    const auto r = geometric_samples(range.lo, range.hi, 48);
    std::vector<double> x, y, rr, logvol;
    for (double ri : r) {
        const double v = ball_volume(M, ri);
        if (!std::isfinite(v) || !(v > 0.0)) break;
        double lv = std::log(v);
        rr.push_back(ri);
        logvol.push_back(lv);
        if (with_log_factor) lv -= std::log(std::log(ri));
        x.push_back(std::log(ri));
        y.push_back(lv);
    }
    const LineFit pw = fit_line(x, y);
    const LineFit ex = fit_line(rr, logvol);
    if (pw.degenerate || x.size() < 4) {
        out.verdict = Verdict::inconclusive;
        out.note = "degenerate fit";
        return out;
    }
    out.fitted_exponent = pw.slope;
    out.exponential_rate = ex.degenerate ? 0.0 : ex.slope;
    out.verdict = pw.slope <= exponent_target + out.slack ? Verdict::holds : Verdict::fails;
    if (x.size() < r.size()) out.note = "volume overflowed before the end of the range";
    return out;
}

GrowthClassification classify_log_volume_growth(const ModelManifold& M, double power,
                                                RadiusRange range) {
    if (!(range.lo > 1.0) || !(range.hi >= 10.0 * range.lo))
        throw DomainError("classify_log_volume_growth needs r > 1 and a range spanning one decade");
    GrowthClassification out;
    out.mode = GrowthMode::log_volume;
    out.target = power;
    out.slack = 0.05;

    // log vol B_r ~ c r^s (log r)^l: polynomial volume gives s = 0, l = 1.
    const auto r = geometric_samples(range.lo, range.hi, 48);
    std::vector<double> rr, logvol;
    for (double ri : r) {
        const double v = ball_volume(M, ri);
        if (!std::isfinite(v)) break;
        if (!(v > std::numbers::e)) continue;
        rr.push_back(ri);
        logvol.push_back(std::log(v));
    }
    const PowerLogFit fit = fit_power_log(rr, logvol);
    if (fit.degenerate || rr.size() < 4) {
        out.verdict = Verdict::inconclusive;
        out.note = "degenerate fit";
        return out;
    }
    const LineFit ex = fit_line(rr, logvol);
    out.fitted_exponent = fit.exponent;
    out.exponential_rate = ex.degenerate ? 0.0 : ex.slope;
    out.with_log_factor = fit.with_log_term;
    out.verdict = fit.exponent <= power + out.slack ? Verdict::holds : Verdict::fails;
    out.note = "log exponent " + std::to_string(fit.log_exponent);
    return out;
}

bool is_nonparabolic(const ModelManifold& M) {
    if (M.warping().family() == WarpingFamily::tabulated)
        throw InconclusiveError("tabulated warping has a finite range; parabolicity undecidable");
    const int m = M.dimension();
    const auto r = geometric_samples(1.0, 1e6, 120);
    std::vector<double> x, y;
    for (double ri : r) {
        const double lg = std::log(M.g(ri));
        if (!std::isfinite(lg)) break;
        const double lf = (1 - m) * lg;
        if (lf < -600.0) break;  // integrand already negligible
        x.push_back(std::log(ri));
        y.push_back(lf);
    }
    if (x.size() < 8) throw InconclusiveError("integrand decays too fast to fit");
    // Fit over the upper half of the usable range.
    const std::size_t half = x.size() / 2;
    const LineFit fit = fit_line(std::span(x).subspan(half), std::span(y).subspan(half));
    if (fit.degenerate) throw InconclusiveError("degenerate integrand fit");
    return fit.slope < -1.05;
}

}  // namespace logman
