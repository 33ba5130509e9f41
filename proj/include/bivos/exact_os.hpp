#pragma once

#include "bivos/copula.hpp"
#include "bivos/quadrature.hpp"

namespace bivos {

/// Identifies the bivariate order statistic (U_{m:n}, V_{k:n}).
struct OrderStatSpec {
    long long n;
    long long m;
    long long k;

    /// Throws DomainError unless n >= 1, 1 <= m <= n and 1 <= k <= n.
    void validate() const;
};

struct ExactOptions {
    /// Largest n accepted by the dynamic-programming routines.
    long long dp_limit = 512;
};

/// P(U_{m:n} <= x) = I_x(m, n - m + 1).
double marginal_cdf(long long n, long long m, double x);

/// Density of V_{k:n}: n binom(n-1, k-1) y^(k-1) (1-y)^(n-k), y in (0,1).
double marginal_density(long long n, long long k, double y);

/// P(U_{m:n} <= x, V_{k:n} <= y) by an exact DP over the four quadrant cells:
/// each observation moves the pair of counts (#{U_i <= x}, #{V_i <= y}) by
/// (1,1), (1,0), (0,1) or (0,0) with probabilities p1..p4. Each count is
/// tracked only as far as its threshold decision requires, so the table has
/// min(m+1, n-m+2) x min(k+1, n-k+2) states. Throws ResourceError for
/// n > options.dp_limit.
double joint_cdf(const Copula& c, const OrderStatSpec& spec, double x, double y,
                 const ExactOptions& options = {});

/// Same quantity by summing multinomial probabilities over every cell
/// composition a+b+c+d = n with a+b >= m, a+c >= k. Oracle scale: n <= 12.
double joint_cdf_bruteforce(const Copula& c, const OrderStatSpec& spec, double x, double y);

enum class TailEngine {
    exact,  ///< two-group binomial convolution
    normal, ///< continuity-corrected normal approximation
};

/// P(U_{m:n} <= x | V_{k:n} = y) as
///   P(S >= m) + dC(x,y)/dy * P(S = m - 1),
/// with S = Binomial(k-1, C(x,y)/y) + Binomial(n-k, (x - C(x,y))/(1-y)).
/// y must lie in (0,1); throws NonDifferentiableError where dC/dy does not exist.
double conditional_cdf(const Copula& c, const OrderStatSpec& spec, double x, double y,
                       TailEngine engine = TailEngine::exact);

/// Integrates conditional_cdf(c, spec, x, t) * marginal_density(n, k, t) over
/// t in (0, y), splitting at the copula's non-differentiability points. Equal to
/// joint_cdf(c, spec, x, y) up to quadrature error.
QuadratureResult reconstruct_joint_detailed(const Copula& c, const OrderStatSpec& spec, double x, double y,
                                            const SimpsonOptions& quad = {},
                                            const ExactOptions& options = {});

double reconstruct_joint(const Copula& c, const OrderStatSpec& spec, double x, double y,
                         const SimpsonOptions& quad = {}, const ExactOptions& options = {});

} // namespace bivos
