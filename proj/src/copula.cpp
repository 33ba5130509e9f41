#include "bivos/copula.hpp"

#include "bivos/error.hpp"
#include "bivos/text.hpp"

#include <algorithm>
#include <cmath>

namespace bivos {
namespace {

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

void check_unit(double u, double v, const char* op) {
    if (!(u >= 0.0 && u <= 1.0) || !(v >= 0.0 && v <= 1.0)) {
        throw DomainError(std::string(op) + ": arguments must lie in [0,1]^2, got (" +
                          format_double(u) + ", " + format_double(v) + ")");
    }
}

// (u^-t + v^-t - 1)^(-1/t), factored through min(u,v) so nothing overflows.
double clayton_cdf(double theta, double u, double v) {
    if (u == 0.0 || v == 0.0) return 0.0;
    const double lo = std::min(u, v);
    const double hi = std::max(u, v);
    const double base = 1.0 + std::pow(lo / hi, theta) - std::pow(lo, theta);
    return lo * std::pow(base, -1.0 / theta);
}

// v^(-t-1) (u^-t + v^-t - 1)^(-1/t-1) = (1 + (v/u)^t - v^t)^(-(1+t)/t)
double clayton_partial(double theta, double u, double v) {
    if (u == 0.0) return 0.0;
    const double base = 1.0 + std::pow(v / u, theta) - std::pow(v, theta);
    return std::pow(base, -(1.0 + theta) / theta);
}

// exp(-s) with s = (x^t + y^t)^(1/t), x = -ln u, y = -ln v.
double gumbel_radius(double theta, double x, double y) {
    const double hi = std::max(x, y);
    if (hi == 0.0) return 0.0;
    const double lo = std::min(x, y);
    return hi * std::pow(1.0 + std::pow(lo / hi, theta), 1.0 / theta);
}

double gumbel_cdf(double theta, double u, double v) {
    if (u == 0.0 || v == 0.0) return 0.0;
    return std::exp(-gumbel_radius(theta, -std::log(u), -std::log(v)));
}

// dC/dv = (C/v) (y/s)^(t-1)
double gumbel_partial(double theta, double u, double v) {
    if (u == 0.0) return 0.0;
    if (u == 1.0) return 1.0;
    if (theta == 1.0) return u;
    if (v == 0.0) return 1.0;
    const double x = -std::log(u);
    const double y = -std::log(v);
    const double s = gumbel_radius(theta, x, y);
    return std::exp(y - s) * std::pow(y / s, theta - 1.0);
}

} // namespace

Copula Copula::clayton(double theta) {
    if (!(theta > 0.0) || !std::isfinite(theta)) {
        throw DomainError("clayton: theta must be > 0, got " + format_double(theta));
    }
    return {Family::clayton, theta};
}

Copula Copula::gumbel(double theta) {
    if (!(theta >= 1.0) || !std::isfinite(theta)) {
        throw DomainError("gumbel: theta must be >= 1, got " + format_double(theta));
    }
    return {Family::gumbel, theta};
}

Copula Copula::fgm(double alpha) {
    if (!(alpha >= -1.0 && alpha <= 1.0)) {
        throw DomainError("fgm: alpha must lie in [-1,1], got " + format_double(alpha));
    }
    return {Family::fgm, alpha};
}

Copula Copula::parse(std::string_view spec) {
    spec = trim(spec);
    const auto colon = spec.find(':');
    const auto name = spec.substr(0, colon);
    const bool has_param = colon != std::string_view::npos;
    const auto param = [&](const char* what) {
        if (!has_param) throw ParseError(std::string(name) + " requires a parameter (" + what + ")");
        return parse_double(spec.substr(colon + 1), what);
    };

    if (name == "independence" || name == "comonotone" || name == "countermonotone") {
        if (has_param) throw ParseError(std::string(name) + " takes no parameter");
        if (name == "independence") return independence();
        if (name == "comonotone") return comonotone();
        return countermonotone();
    }
    if (name == "clayton") return clayton(param("clayton:<theta>"));
    if (name == "gumbel") return gumbel(param("gumbel:<theta>"));
    if (name == "fgm") return fgm(param("fgm:<alpha>"));
    throw ParseError("unknown copula '" + std::string(spec) + "'");
}

std::string Copula::to_string() const {
    switch (family_) {
    case Family::independence: return "independence";
    case Family::comonotone: return "comonotone";
    case Family::countermonotone: return "countermonotone";
    case Family::clayton: return "clayton:" + format_shortest(parameter_);
    case Family::gumbel: return "gumbel:" + format_shortest(parameter_);
    case Family::fgm: return "fgm:" + format_shortest(parameter_);
    }
    return {};
}

Copula Copula::reflected() const {
    switch (family_) {
    case Family::independence:
    case Family::comonotone:
    case Family::countermonotone:
    case Family::fgm:
        return *this;
    case Family::clayton:
    case Family::gumbel:
        break;
    }
    throw DomainError("survival copula of " + to_string() + " is not in the zoo");
}

double cdf(const Copula& c, double u, double v) {
    check_unit(u, v, "cdf");
    const double t = c.parameter();
    double value = 0.0;
    switch (c.family()) {
    case Family::independence: value = u * v; break;
    case Family::comonotone: value = std::min(u, v); break;
    case Family::countermonotone: value = std::max(u + v - 1.0, 0.0); break;
    case Family::clayton: value = clayton_cdf(t, u, v); break;
    case Family::gumbel: value = gumbel_cdf(t, u, v); break;
    case Family::fgm: value = u * v * (1.0 + t * (1.0 - u) * (1.0 - v)); break;
    }
    return clamp01(value);
}

double partial_v(const Copula& c, double u, double v) {
    check_unit(u, v, "partial_v");
    const double t = c.parameter();
    double value = 0.0;
    switch (c.family()) {
    case Family::independence: value = u; break;
    case Family::comonotone: value = (u > 0.0 && v <= u) ? 1.0 : 0.0; break;
    case Family::countermonotone: value = (v > 1.0 - u) ? 1.0 : 0.0; break;
    case Family::clayton: value = clayton_partial(t, u, v); break;
    case Family::gumbel: value = gumbel_partial(t, u, v); break;
    case Family::fgm: value = u * (1.0 + t * (1.0 - u) * (1.0 - 2.0 * v)); break;
    }
    return clamp01(value);
}

bool partial_v_exists(const Copula& c, double u, double v) {
    check_unit(u, v, "partial_v_exists");
    switch (c.family()) {
    case Family::comonotone: return !(u == v && u > 0.0 && u < 1.0);
    // Compared against the rounded 1 - u so that the kink is a single point.
    case Family::countermonotone: return !(v == 1.0 - u && u > 0.0 && u < 1.0);
    default: return true;
    }
}

double partial_v_numeric(const Copula& c, double u, double v, double h) {
    check_unit(u, v, "partial_v_numeric");
    const double lo = std::max(v - h, 0.0);
    const double hi = std::min(v + h, 1.0);
    return clamp01((cdf(c, u, hi) - cdf(c, u, lo)) / (hi - lo));
}

double cond_cdf_given_le(const Copula& c, double u, double y) {
    check_unit(u, y, "cond_cdf_given_le");
    if (y == 0.0) throw DomainError("cond_cdf_given_le: conditioning event {V <= 0} has probability 0");
    return clamp01(cdf(c, u, y) / y);
}

double cond_cdf_given_gt(const Copula& c, double u, double y) {
    check_unit(u, y, "cond_cdf_given_gt");
    if (y == 1.0) throw DomainError("cond_cdf_given_gt: conditioning event {V > 1} has probability 0");
    return clamp01((u - cdf(c, u, y)) / (1.0 - y));
}

CellProbabilities cell_probs(const Copula& c, double x, double y) {
    check_unit(x, y, "cell_probs");
    const double joint = cdf(c, x, y);
    return {clamp01(joint), clamp01(x - joint), clamp01(y - joint), clamp01(1.0 - x - y + joint)};
}

double conditional_quantile_bisection(const Copula& c, double w, double v) {
    double lo = 0.0;
    double hi = 1.0;
    for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (partial_v(c, mid, v) < w) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double conditional_quantile(const Copula& c, double w, double v) {
    check_unit(w, v, "conditional_quantile");
    const double t = c.parameter();
    switch (c.family()) {
    case Family::independence: return w;
    case Family::comonotone: return v;
    case Family::countermonotone: return 1.0 - v;
    case Family::clayton: {
        if (w == 0.0 || v == 0.0) return w == 0.0 ? 0.0 : w;
        const double a = std::pow(w, -t / (1.0 + t)) - 1.0;
        return clamp01(std::pow(1.0 + a * std::pow(v, -t), -1.0 / t));
    }
    case Family::fgm: {
        // a u^2 - (1 + a) u + w = 0, the root in [0,1] written without cancellation
        const double a = t * (1.0 - 2.0 * v);
        const double b = 1.0 + a;
        return clamp01(2.0 * w / (b + std::sqrt(std::max(b * b - 4.0 * a * w, 0.0))));
    }
    case Family::gumbel: break;
    }
    return conditional_quantile_bisection(c, w, v);
}

UnitPair draw(const Copula& c, Engine& rng) {
    switch (c.family()) {
    case Family::comonotone: {
        const double u = unit_open(rng());
        return {u, u};
    }
    case Family::countermonotone: {
        const double u = unit_open(rng());
        return {u, 1.0 - u};
    }
    default: break;
    }
    const double v = unit_open(rng());
    const double w = unit_open(rng());
    return {conditional_quantile(c, w, v), v};
}

void sample_into(const Copula& c, Engine& rng, std::span<double> us, std::span<double> vs) {
    if (us.size() != vs.size()) throw DomainError("sample_into: output spans differ in length");
    for (std::size_t i = 0; i < us.size(); ++i) {
        const auto [u, v] = draw(c, rng);
        us[i] = u;
        vs[i] = v;
    }
}

std::vector<UnitPair> sample(const Copula& c, std::uint64_t seed, std::size_t count) {
    if (count == 0) throw DomainError("sample: count must be >= 1");
    Engine rng(seed);
    std::vector<UnitPair> out(count);
    for (auto& p : out) p = draw(c, rng);
    return out;
}

} // namespace bivos
