#include "bivos/discrete_dist.hpp"

#include "bivos/error.hpp"
#include "bivos/limit_laws.hpp"
#include "bivos/text.hpp"

#include <boost/math/distributions/binomial.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bivos {
namespace {

void check_prob(double p, const char* op) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError(std::string(op) + ": probability outside [0,1]: " + format_double(p));
    }
}

} // namespace

DiscretePmf::DiscretePmf(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw DomainError("pmf: empty weight vector");
    double total = 0.0;
    for (double w : weights_) {
        if (!(w >= -1e-15)) throw DomainError("pmf: negative weight " + format_double(w));
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-10) {
        throw DomainError("pmf: weights sum to " + format_double(total));
    }
}

double DiscretePmf::operator[](long long i) const noexcept {
    if (i < 0 || i >= static_cast<long long>(weights_.size())) return 0.0;
    return std::max(weights_[static_cast<std::size_t>(i)], 0.0);
}

std::vector<double> DiscretePmf::weights() const {
    std::vector<double> out(weights_.size());
    std::transform(weights_.begin(), weights_.end(), out.begin(),
                   [](double w) { return std::max(w, 0.0); });
    return out;
}

double DiscretePmf::mean() const noexcept {
    double m = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) m += static_cast<double>(i) * (*this)[i];
    return m;
}

double DiscretePmf::variance() const noexcept {
    const double mu = mean();
    double v = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        const double d = static_cast<double>(i) - mu;
        v += d * d * (*this)[i];
    }
    return v;
}

DiscretePmf poisson_binomial_pmf(std::span<const double> probs) {
    std::vector<double> pmf(probs.size() + 1, 0.0);
    pmf[0] = 1.0;
    std::size_t top = 0;
    for (double p : probs) {
        check_prob(p, "poisson_binomial_pmf");
        const double q = 1.0 - p;
        pmf[top + 1] = pmf[top] * p;
        for (std::size_t i = top; i > 0; --i) pmf[i] = pmf[i] * q + pmf[i - 1] * p;
        pmf[0] *= q;
        ++top;
    }
    return DiscretePmf(std::move(pmf));
}

DiscretePmf binomial_pmf(std::size_t n, double q) {
    check_prob(q, "binomial_pmf");
    std::vector<double> pmf(n + 1, 0.0);
    if (q == 0.0) {
        pmf[0] = 1.0;
    } else if (q == 1.0) {
        pmf[n] = 1.0;
    } else {
        const boost::math::binomial_distribution<double> law(static_cast<double>(n), q);
        for (std::size_t i = 0; i <= n; ++i) pmf[i] = boost::math::pdf(law, static_cast<double>(i));
    }
    return DiscretePmf(std::move(pmf));
}

DiscretePmf two_group_pmf(double q1, std::size_t n1, double q2, std::size_t n2) {
    check_prob(q1, "two_group_pmf");
    check_prob(q2, "two_group_pmf");
    const auto a = binomial_pmf(n1, q1);
    const auto b = binomial_pmf(n2, q2);
    std::vector<double> out(n1 + n2 + 1, 0.0);
    for (std::size_t i = 0; i <= n1; ++i) {
        const double ai = a[static_cast<long long>(i)];
        if (ai == 0.0) continue;
        for (std::size_t j = 0; j <= n2; ++j) out[i + j] += ai * b[static_cast<long long>(j)];
    }
    return DiscretePmf(std::move(out));
}

double tail_ge(const DiscretePmf& pmf, long long m) {
    if (m <= 0) return 1.0;
    const auto n = static_cast<long long>(pmf.max_value());
    if (m > n) return 0.0;
    double sum = 0.0;
    for (long long i = n; i >= m; --i) sum += pmf[i];
    return std::clamp(sum, 0.0, 1.0);
}

double normal_tail_approx(double q1, std::size_t n1, double q2, std::size_t n2, long long m) {
    check_prob(q1, "normal_tail_approx");
    check_prob(q2, "normal_tail_approx");
    const double d1 = static_cast<double>(n1);
    const double d2 = static_cast<double>(n2);
    const double mu = d1 * q1 + d2 * q2;
    const double var = d1 * q1 * (1.0 - q1) + d2 * q2 * (1.0 - q2);
    if (!(var > 0.0)) throw DegenerateVarianceError("normal_tail_approx: the two-group sum has zero variance");
    return std_normal_cdf((mu - static_cast<double>(m) + 0.5) / std::sqrt(var));
}

} // namespace bivos
