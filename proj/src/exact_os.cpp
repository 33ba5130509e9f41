#include "bivos/exact_os.hpp"

#include "bivos/discrete_dist.hpp"
#include "bivos/error.hpp"
#include "bivos/text.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace bivos {
namespace {

void check_prob(double p, const char* op, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError(std::string(op) + ": " + name + " must lie in [0,1], got " + format_double(p));
    }
}

void check_rank(long long n, long long r, const char* op) {
    if (n < 1 || r < 1 || r > n) {
        throw DomainError(std::string(op) + ": need 1 <= rank <= n, got n=" + std::to_string(n) +
                          " rank=" + std::to_string(r));
    }
}

void check_dp_limit(long long n, const ExactOptions& options, const char* op) {
    if (n > options.dp_limit) {
        throw ResourceError(std::string(op) + ": n=" + std::to_string(n) + " exceeds the DP limit " +
                            std::to_string(options.dp_limit));
    }
}

// Decides {#hits >= need} over n trials with as few states as possible.
// Capped: state = min(#hits, need), success iff state == need.
// Truncated: state = #misses, mass dropped once #misses > n - need.
class ThresholdCounter {
public:
    ThresholdCounter(long long n, long long need)
        : capped_(need + 1 <= n - need + 1), need_(need), max_misses_(n - need) {}

    std::size_t states() const {
        return static_cast<std::size_t>(capped_ ? need_ + 1 : max_misses_ + 1);
    }
    // -1 means the trajectory can no longer succeed.
    long long on_hit(long long s) const { return capped_ ? std::min(s + 1, need_) : s; }
    long long on_miss(long long s) const {
        if (capped_) return s;
        return s + 1 <= max_misses_ ? s + 1 : -1;
    }
    bool success(long long s) const { return capped_ ? s == need_ : true; }

private:
    bool capped_;
    long long need_;
    long long max_misses_;
};

} // namespace

void OrderStatSpec::validate() const {
    if (n < 1) throw DomainError("order statistic spec: n must be >= 1");
    if (m < 1 || m > n || k < 1 || k > n) {
        throw DomainError("order statistic spec: need 1 <= m,k <= n, got n=" + std::to_string(n) +
                          " m=" + std::to_string(m) + " k=" + std::to_string(k));
    }
}

double marginal_cdf(long long n, long long m, double x) {
    check_rank(n, m, "marginal_cdf");
    check_prob(x, "marginal_cdf", "x");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    return boost::math::ibeta(static_cast<double>(m), static_cast<double>(n - m + 1), x);
}

double marginal_density(long long n, long long k, double y) {
    check_rank(n, k, "marginal_density");
    if (!(y > 0.0 && y < 1.0)) {
        throw DomainError("marginal_density: y must lie in (0,1), got " + format_double(y));
    }
    return boost::math::ibeta_derivative(static_cast<double>(k), static_cast<double>(n - k + 1), y);
}

double joint_cdf(const Copula& c, const OrderStatSpec& spec, double x, double y, const ExactOptions& options) {
    spec.validate();
    check_prob(x, "joint_cdf", "x");
    check_prob(y, "joint_cdf", "y");
    check_dp_limit(spec.n, options, "joint_cdf");

    const auto cells = cell_probs(c, x, y);
    const ThresholdCounter ucount(spec.n, spec.m);
    const ThresholdCounter vcount(spec.n, spec.k);
    const std::size_t su = ucount.states();
    const std::size_t sv = vcount.states();

    std::vector<double> cur(su * sv, 0.0);
    std::vector<double> next(su * sv, 0.0);
    cur[0] = 1.0;

    const auto add = [&](long long a, long long b, double w) {
        if (a >= 0 && b >= 0) next[static_cast<std::size_t>(a) * sv + static_cast<std::size_t>(b)] += w;
    };

    for (long long trial = 0; trial < spec.n; ++trial) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t a = 0; a < su; ++a) {
            const auto ia = static_cast<long long>(a);
            const long long ah = ucount.on_hit(ia);
            const long long am = ucount.on_miss(ia);
            for (std::size_t b = 0; b < sv; ++b) {
                const double w = cur[a * sv + b];
                if (w == 0.0) continue;
                const auto ib = static_cast<long long>(b);
                const long long bh = vcount.on_hit(ib);
                const long long bm = vcount.on_miss(ib);
                add(ah, bh, w * cells.p1);
                add(ah, bm, w * cells.p2);
                add(am, bh, w * cells.p3);
                add(am, bm, w * cells.p4);
            }
        }
        std::swap(cur, next);
    }

    double total = 0.0;
    for (std::size_t a = 0; a < su; ++a) {
        if (!ucount.success(static_cast<long long>(a))) continue;
        for (std::size_t b = 0; b < sv; ++b) {
            if (vcount.success(static_cast<long long>(b))) total += cur[a * sv + b];
        }
    }
    return std::clamp(total, 0.0, 1.0);
}

double joint_cdf_bruteforce(const Copula& c, const OrderStatSpec& spec, double x, double y) {
    spec.validate();
    check_prob(x, "joint_cdf_bruteforce", "x");
    check_prob(y, "joint_cdf_bruteforce", "y");
    if (spec.n > 12) throw ResourceError("joint_cdf_bruteforce: oracle limited to n <= 12");

    const auto cells = cell_probs(c, x, y);
    const int n = static_cast<int>(spec.n);
    std::vector<double> fact(static_cast<std::size_t>(n) + 1, 1.0);
    for (int i = 1; i <= n; ++i) fact[static_cast<std::size_t>(i)] = fact[static_cast<std::size_t>(i) - 1] * i;

    double total = 0.0;
    for (int a = 0; a <= n; ++a) {
        for (int b = 0; a + b <= n; ++b) {
            for (int cc = 0; a + b + cc <= n; ++cc) {
                const int d = n - a - b - cc;
                if (a + b < spec.m || a + cc < spec.k) continue;
                const double coef = fact[static_cast<std::size_t>(n)] /
                                    (fact[static_cast<std::size_t>(a)] * fact[static_cast<std::size_t>(b)] *
                                     fact[static_cast<std::size_t>(cc)] * fact[static_cast<std::size_t>(d)]);
                total += coef * std::pow(cells.p1, a) * std::pow(cells.p2, b) * std::pow(cells.p3, cc) *
                         std::pow(cells.p4, d);
            }
        }
    }
    return std::clamp(total, 0.0, 1.0);
}

double conditional_cdf(const Copula& c, const OrderStatSpec& spec, double x, double y, TailEngine engine) {
    spec.validate();
    check_prob(x, "conditional_cdf", "x");
    if (!(y > 0.0 && y < 1.0)) {
        throw DomainError("conditional_cdf: y must lie in (0,1), got " + format_double(y));
    }
    if (!partial_v_exists(c, x, y)) {
        throw NonDifferentiableError("conditional_cdf: dC/dy does not exist for " + c.to_string() + " at (" +
                                     format_double(x) + ", " + format_double(y) + ")");
    }

    const double q1 = cond_cdf_given_le(c, x, y);
    const double q2 = cond_cdf_given_gt(c, x, y);
    const double slope = partial_v(c, x, y);
    const auto n1 = static_cast<std::size_t>(spec.k - 1);
    const auto n2 = static_cast<std::size_t>(spec.n - spec.k);

    double at_least_m = 0.0;
    double exactly_m_minus_1 = 0.0;
    if (engine == TailEngine::exact) {
        const auto pmf = two_group_pmf(q1, n1, q2, n2);
        at_least_m = tail_ge(pmf, spec.m);
        exactly_m_minus_1 = pmf[spec.m - 1];
    } else {
        const double upper = normal_tail_approx(q1, n1, q2, n2, spec.m);
        at_least_m = upper;
        exactly_m_minus_1 = std::max(normal_tail_approx(q1, n1, q2, n2, spec.m - 1) - upper, 0.0);
    }
    return std::clamp(at_least_m + slope * exactly_m_minus_1, 0.0, 1.0);
}

QuadratureResult reconstruct_joint_detailed(const Copula& c, const OrderStatSpec& spec, double x, double y,
                                            const SimpsonOptions& quad, const ExactOptions& options) {
    spec.validate();
    check_prob(x, "reconstruct_joint", "x");
    if (!(y > 0.0 && y <= 1.0)) {
        throw DomainError("reconstruct_joint: y must lie in (0,1], got " + format_double(y));
    }
    check_dp_limit(spec.n, options, "reconstruct_joint");

    std::vector<double> cuts{0.0};
    const auto add_cut = [&](double t) {
        if (t > 0.0 && t < y) cuts.push_back(t);
    };
    if (c.family() == Family::comonotone) add_cut(x);
    if (c.family() == Family::countermonotone) add_cut(1.0 - x);
    cuts.push_back(y);

    const auto integrand = [&](double t) {
        return conditional_cdf(c, spec, x, t) * marginal_density(spec.n, spec.k, t);
    };

    SimpsonOptions piece = quad;
    piece.open_endpoints = true;
    piece.abs_tol = quad.abs_tol / static_cast<double>(cuts.size() - 1);

    QuadratureResult total{0.0, 0.0, 0};
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const auto part = adaptive_simpson(integrand, cuts[i], cuts[i + 1], piece);
        total.value += part.value;
        total.error_estimate += part.error_estimate;
        total.subdivisions += part.subdivisions;
    }
    return total;
}

double reconstruct_joint(const Copula& c, const OrderStatSpec& spec, double x, double y,
                         const SimpsonOptions& quad, const ExactOptions& options) {
    return reconstruct_joint_detailed(c, spec, x, y, quad, options).value;
}

} // namespace bivos
