#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bivos {

/// Probability mass function on {0, ..., n}. Entries may carry tiny negative
/// rounding residue (>= -1e-15); reads through `operator[]` clamp them to 0.
class DiscretePmf {
public:
    /// Throws DomainError if a weight is below -1e-15 or the total deviates
    /// from 1 by more than 1e-10.
    explicit DiscretePmf(std::vector<double> weights);

    /// Largest support point n.
    std::size_t max_value() const noexcept { return weights_.size() - 1; }
    std::size_t size() const noexcept { return weights_.size(); }

    /// Mass at i; 0 outside {0, ..., n}.
    double operator[](long long i) const noexcept;

    std::span<const double> raw() const noexcept { return weights_; }

    /// Clamped copy of the weights.
    std::vector<double> weights() const;

    double mean() const noexcept;
    double variance() const noexcept;

private:
    std::vector<double> weights_;
};

/// Law of a sum of independent Bernoulli(p_i), built one trial at a time.
DiscretePmf poisson_binomial_pmf(std::span<const double> probs);

DiscretePmf binomial_pmf(std::size_t n, double q);

/// Law of Binomial(n1, q1) + Binomial(n2, q2) by direct convolution.
DiscretePmf two_group_pmf(double q1, std::size_t n1, double q2, std::size_t n2);

/// P(X >= m). 1 for m <= 0, 0 for m > n; summed from the top of the support down.
double tail_ge(const DiscretePmf& pmf, long long m);

/// Normal approximation with continuity correction to
/// P(Binomial(n1,q1) + Binomial(n2,q2) >= m): Phi((mu - m + 1/2) / sigma).
/// Approximation mode only. Throws DegenerateVarianceError when sigma = 0.
double normal_tail_approx(double q1, std::size_t n1, double q2, std::size_t n2, long long m);

} // namespace bivos
