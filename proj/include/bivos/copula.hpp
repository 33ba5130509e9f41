#pragma once

#include "bivos/rng.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bivos {

enum class Family { independence, comonotone, countermonotone, clayton, gumbel, fgm };

/// A bivariate copula from a fixed zoo of families. Value type; the parameter
/// is validated on construction.
///
/// Specification strings: `independence`, `comonotone`, `countermonotone`,
/// `clayton:<theta>` (theta > 0), `gumbel:<theta>` (theta >= 1),
/// `fgm:<alpha>` (alpha in [-1, 1]).
class Copula {
public:
    static Copula independence() { return {Family::independence, 0.0}; }
    static Copula comonotone() { return {Family::comonotone, 0.0}; }
    static Copula countermonotone() { return {Family::countermonotone, 0.0}; }
    static Copula clayton(double theta);
    static Copula gumbel(double theta);
    static Copula fgm(double alpha);

    /// Throws ParseError on malformed input and DomainError on a bad parameter.
    static Copula parse(std::string_view spec);

    Family family() const noexcept { return family_; }
    double parameter() const noexcept { return parameter_; }

    /// Canonical specification string; `parse(c.to_string()) == c`.
    std::string to_string() const;

    /// Survival copula C^(u,v) = u + v - 1 + C(1-u, 1-v), the law of (1-U, 1-V).
    /// Throws DomainError for families whose survival copula is outside the zoo
    /// (Clayton, Gumbel-Hougaard).
    Copula reflected() const;

    bool operator==(const Copula&) const = default;

private:
    Copula(Family family, double parameter) : family_(family), parameter_(parameter) {}

    Family family_;
    double parameter_;
};

/// Quadrant masses of (U, V) relative to the point (x, y).
struct CellProbabilities {
    double p1; ///< P(U <= x, V <= y)
    double p2; ///< P(U <= x, V >  y)
    double p3; ///< P(U >  x, V <= y)
    double p4; ///< P(U >  x, V >  y)
};

struct UnitPair {
    double u;
    double v;
};

double cdf(const Copula& c, double u, double v);

/// dC(u,v)/dv, clamped to [0,1]. Where the derivative does not exist
/// (comonotone on v = u, countermonotone on u + v = 1) the left limit in v is
/// returned; use `partial_v_exists` to detect those points.
double partial_v(const Copula& c, double u, double v);

bool partial_v_exists(const Copula& c, double u, double v);

/// Central finite difference of `cdf` in v (one-sided at the edges), clamped
/// to [0,1]. Fallback for families without a closed-form derivative.
double partial_v_numeric(const Copula& c, double u, double v, double h = 1e-6);

/// P(U <= u | V <= y) = C(u,y)/y. Requires y in (0,1].
double cond_cdf_given_le(const Copula& c, double u, double y);

/// P(U <= u | V > y) = (u - C(u,y))/(1 - y). Requires y in [0,1).
double cond_cdf_given_gt(const Copula& c, double u, double y);

CellProbabilities cell_probs(const Copula& c, double x, double y);

/// Solves partial_v(c, u, v) = w for u. Closed form where available,
/// bisection otherwise.
double conditional_quantile(const Copula& c, double w, double v);

/// Bisection inverse of u -> partial_v(c, u, v): tolerance 1e-12, at most
/// 200 iterations.
double conditional_quantile_bisection(const Copula& c, double w, double v);

/// One draw by the conditional-inverse method: V uniform, then U from the
/// conditional law dC(., V)/dv.
UnitPair draw(const Copula& c, Engine& rng);

/// Fills `us` and `vs` (same length) with independent draws from `c`.
void sample_into(const Copula& c, Engine& rng, std::span<double> us, std::span<double> vs);

/// `count` draws from `c`, deterministic in `seed`.
std::vector<UnitPair> sample(const Copula& c, std::uint64_t seed, std::size_t count);

} // namespace bivos
