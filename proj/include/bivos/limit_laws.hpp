#pragma once

#include <string>
#include <string_view>

namespace bivos {

/// Standard normal CDF via erfc.
double std_normal_cdf(double x);

/// G_j(x) = exp(x) * sum_{i<j} (-x)^i / i! for x <= 0, and 1 for x > 0:
/// the limit law of n(V_{n-j+1:n} - 1).
double gj_cdf(int j, double x);

/// Executable rank sequence n -> k(n).
///
///   sqrt       floor(n^(1/2))
///   n23        floor(n^(2/3))
///   log        ceil(ln n)
///   frac:<l>   floor(l * n), l in (0,1)
///   const:<j>  j
struct RankRule {
    enum class Kind { sqrt, n23, log, frac, constant };

    Kind kind = Kind::constant;
    double value = 1.0;

    static RankRule parse(std::string_view text);
    static RankRule constant(long long j) { return {Kind::constant, static_cast<double>(j)}; }
    static RankRule fraction(double lambda);

    /// Raw rule value; no range check.
    long long evaluate(long long n) const;

    /// Rule value, throwing RankRuleError unless it lies in {1, ..., n}.
    long long at(long long n) const;

    std::string to_string() const;
    bool operator==(const RankRule&) const = default;
};

enum class CaseId { I, II, III, IV, V };

/// One of the five asymptotic-independence regimes. `lambda` is meaningful
/// for cases III and IV only.
///
/// Case strings: `case=I..V; k=<rule>; j=<rule>; lambda=<real>` (the leading
/// `case=` may be omitted). Omitted fields take the per-case defaults:
///   I, II: k=sqrt, j=const:2
///   III:   lambda=0.5, k=frac:lambda, j=const:2
///   IV:    lambda=0.5, k=frac:lambda, j=log
///   V:     k=n23, j=log
struct LimitCase {
    CaseId id = CaseId::I;
    RankRule k_rule;
    RankRule j_rule;
    double lambda = 0.0;

    static LimitCase defaults(CaseId id);
    static LimitCase parse(std::string_view text);

    /// True where the v-component limit is G_j with fixed j (cases I-III).
    bool v_is_extreme() const noexcept { return id == CaseId::I || id == CaseId::II || id == CaseId::III; }
    bool u_is_central() const noexcept { return id == CaseId::III || id == CaseId::IV; }

    std::string to_string() const;
    bool operator==(const LimitCase&) const = default;
};

const char* case_name(CaseId id) noexcept;

/// Ranks realised by a case at sample size n: the pair is (U_{u_rank:n}, V_{v_rank:n}).
struct CaseRanks {
    long long n;
    long long k;
    long long j;
    long long u_rank;
    long long v_rank;

    double k_over_n() const noexcept;
    double j_over_sqrt_k() const noexcept;
};

/// Throws RankRuleError if k(n) or j(n) leaves {1, ..., n}.
CaseRanks resolve_ranks(const LimitCase& c, long long n);

/// s = scale * (x - center); strictly increasing.
struct AffineMap {
    double scale;
    double center;

    double apply(double x) const noexcept { return scale * (x - center); }
    double invert(double s) const noexcept { return center + s / scale; }
};

struct ScaledPair {
    double su;
    double sv;
};

struct ScalingMap {
    AffineMap u;
    AffineMap v;

    ScaledPair apply(double u, double v) const noexcept { return {this->u.apply(u), this->v.apply(v)}; }
};

ScalingMap scaling_for(const LimitCase& c, long long n);

ScaledPair scaling_map(const LimitCase& c, long long n, double u, double v);

/// Product limit law of the scaled pair.
struct LimitLaw {
    double u_sd;  ///< 1, or sqrt(lambda (1 - lambda)) in the central cases
    int gj_index; ///< j for a G_j v-component, 0 for a standard normal one

    double u_cdf(double x) const;
    double v_cdf(double y) const;
    double joint_cdf(double x, double y) const { return u_cdf(x) * v_cdf(y); }
};

/// Throws DomainError if a case with a G_j component has a non-constant j rule.
LimitLaw limit_law(const LimitCase& c);

double limit_joint_cdf(const LimitCase& c, double x, double y);

/// (r k / (n (n - r - k + 1)))^(1/2) for 1 <= r <= n - k + 1 <= n. Infinite at
/// r = n - k + 1, where both order statistics coincide.
double univariate_bound(long long n, long long r, long long k);

} // namespace bivos
