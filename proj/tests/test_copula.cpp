#include "bivos/copula.hpp"
#include "bivos/error.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace bivos;

namespace {

const Copula kClayton1 = Copula::clayton(1.0);

TEST(CopulaCdf, SpecValues) {
    EXPECT_DOUBLE_EQ(cdf(Copula::independence(), 0.5, 0.5), 0.25);
    EXPECT_DOUBLE_EQ(cdf(Copula::comonotone(), 0.3, 0.7), 0.3);
    EXPECT_NEAR(cdf(kClayton1, 0.5, 0.5), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(cdf(Copula::countermonotone(), 0.3, 0.8), 0.1, 1e-15);
    EXPECT_DOUBLE_EQ(cdf(Copula::countermonotone(), 0.3, 0.6), 0.0);
}

TEST(CopulaCdf, ClaytonMatchesTextbookFormula) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.01, 1.0);
    for (double theta : {0.3, 1.0, 2.0, 7.5}) {
        const auto c = Copula::clayton(theta);
        for (int i = 0; i < 200; ++i) {
            const double u = unit(rng);
            const double v = unit(rng);
            EXPECT_NEAR(cdf(c, u, v), oracle::clayton_direct(theta, u, v), 1e-13) << theta << ' ' << u << ' ' << v;
        }
    }
}

TEST(CopulaCdf, ClaytonAtZeroIsZero) {
    const auto c = Copula::clayton(50.0);
    EXPECT_EQ(cdf(c, 0.0, 0.4), 0.0);
    EXPECT_EQ(cdf(c, 0.4, 0.0), 0.0);
    EXPECT_EQ(partial_v(c, 0.0, 0.4), 0.0);
    // tiny arguments with a large theta must not overflow
    EXPECT_TRUE(std::isfinite(cdf(c, 1e-8, 1e-9)));
}

TEST(CopulaCdf, RejectsPointsOutsideUnitSquare) {
    for (const auto& c : oracle::zoo()) {
        EXPECT_THROW(cdf(c, -0.1, 0.5), DomainError);
        EXPECT_THROW(cdf(c, 0.5, 1.5), DomainError);
        EXPECT_THROW(partial_v(c, 0.5, std::nan("")), DomainError);
        EXPECT_THROW(cell_probs(c, 2.0, 0.5), DomainError);
    }
}

TEST(CopulaPartial, SpecValues) {
    EXPECT_DOUBLE_EQ(partial_v(Copula::independence(), 0.4, 0.9), 0.4);
    EXPECT_EQ(partial_v(Copula::comonotone(), 0.5, 0.2), 1.0);
    EXPECT_EQ(partial_v(Copula::comonotone(), 0.5, 0.8), 0.0);
    EXPECT_NEAR(partial_v(kClayton1, 0.5, 0.5), 4.0 / 9.0, 1e-15);
}

TEST(CopulaPartial, LeftLimitAtKinks) {
    // comonotone: the kink is v = u; just below it the slope is 1
    EXPECT_EQ(partial_v(Copula::comonotone(), 0.5, 0.5), 1.0);
    EXPECT_FALSE(partial_v_exists(Copula::comonotone(), 0.5, 0.5));
    EXPECT_TRUE(partial_v_exists(Copula::comonotone(), 0.5, 0.49));
    // countermonotone: kink on u + v = 1; just below it the slope is 0
    EXPECT_EQ(partial_v(Copula::countermonotone(), 0.25, 0.75), 0.0);
    EXPECT_FALSE(partial_v_exists(Copula::countermonotone(), 0.25, 0.75));
    for (const auto& c : {Copula::independence(), kClayton1, Copula::gumbel(3.0), Copula::fgm(-0.7)}) {
        EXPECT_TRUE(partial_v_exists(c, 0.3, 0.3));
    }
}

TEST(CopulaPartial, GumbelEdges) {
    const auto g = Copula::gumbel(2.5);
    EXPECT_EQ(partial_v(g, 0.0, 0.3), 0.0);
    EXPECT_EQ(partial_v(g, 1.0, 0.3), 1.0);
    EXPECT_EQ(partial_v(g, 0.4, 0.0), 1.0);
    EXPECT_EQ(partial_v(g, 0.4, 1.0), 0.0);
    EXPECT_DOUBLE_EQ(partial_v(Copula::gumbel(1.0), 0.4, 0.7), 0.4);
}

TEST(CopulaPartial, AgreesWithFiniteDifferences) {
    const auto grid = oracle::unit_grid(21);
    for (const auto& c : oracle::extended_zoo()) {
        for (double u : grid) {
            for (double v : grid) {
                if (u == 0.0 || u == 1.0 || v < 0.01 || v > 0.99) continue;
                if (c.family() == Family::comonotone && std::abs(u - v) < 1e-3) continue;
                if (c.family() == Family::countermonotone && std::abs(u + v - 1.0) < 1e-3) continue;
                EXPECT_NEAR(partial_v(c, u, v), oracle::central_difference_v(c, u, v), 1e-5)
                    << c.to_string() << " at (" << u << ", " << v << ")";
            }
        }
    }
}

TEST(CopulaPartial, NumericFallbackTracksAnalytic) {
    for (const auto& c : {kClayton1, Copula::gumbel(1.7), Copula::fgm(0.9)}) {
        EXPECT_NEAR(partial_v_numeric(c, 0.35, 0.6), partial_v(c, 0.35, 0.6), 1e-6);
        EXPECT_GE(partial_v_numeric(c, 0.35, 0.0), 0.0);
        EXPECT_LE(partial_v_numeric(c, 0.35, 1.0), 1.0);
    }
}

TEST(CopulaConditional, SpecValues) {
    EXPECT_DOUBLE_EQ(cond_cdf_given_le(Copula::independence(), 0.7, 0.5), 0.7);
    EXPECT_DOUBLE_EQ(cond_cdf_given_le(Copula::comonotone(), 0.2, 0.5), 0.4);
    EXPECT_NEAR(cond_cdf_given_le(kClayton1, 0.5, 0.5), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(cond_cdf_given_gt(Copula::independence(), 0.7, 0.5), 0.7, 1e-15);
    EXPECT_DOUBLE_EQ(cond_cdf_given_gt(Copula::comonotone(), 0.2, 0.5), 0.0);
    EXPECT_NEAR(cond_cdf_given_gt(kClayton1, 0.5, 0.5), 1.0 / 3.0, 1e-15);
}

TEST(CopulaConditional, DegenerateConditioningIsAnError) {
    EXPECT_THROW(cond_cdf_given_le(kClayton1, 0.5, 0.0), DomainError);
    EXPECT_THROW(cond_cdf_given_gt(kClayton1, 0.5, 1.0), DomainError);
}

TEST(CopulaConditional, AreCdfsAndMixToUniform) {
    const auto grid = oracle::unit_grid(41);
    for (const auto& c : oracle::extended_zoo()) {
        for (double y : grid) {
            if (y == 0.0 || y == 1.0) continue;
            EXPECT_EQ(cond_cdf_given_le(c, 0.0, y), 0.0);
            EXPECT_NEAR(cond_cdf_given_le(c, 1.0, y), 1.0, 1e-12);
            EXPECT_EQ(cond_cdf_given_gt(c, 0.0, y), 0.0);
            EXPECT_NEAR(cond_cdf_given_gt(c, 1.0, y), 1.0, 1e-12);
            double prev_le = 0.0;
            double prev_gt = 0.0;
            for (double u : grid) {
                const double le = cond_cdf_given_le(c, u, y);
                const double gt = cond_cdf_given_gt(c, u, y);
                EXPECT_GE(le, prev_le - 1e-12);
                EXPECT_GE(gt, prev_gt - 1e-12);
                prev_le = le;
                prev_gt = gt;
                EXPECT_NEAR(y * le + (1.0 - y) * gt, u, 1e-12) << c.to_string();
            }
        }
    }
}

TEST(CopulaCells, SpecValuesAndSum) {
    const auto i = cell_probs(Copula::independence(), 0.5, 0.5);
    EXPECT_DOUBLE_EQ(i.p1, 0.25);
    EXPECT_DOUBLE_EQ(i.p4, 0.25);
    const auto m = cell_probs(Copula::comonotone(), 0.3, 0.7);
    EXPECT_DOUBLE_EQ(m.p1, 0.3);
    EXPECT_DOUBLE_EQ(m.p2, 0.0);
    EXPECT_NEAR(m.p3, 0.4, 1e-15);
    EXPECT_NEAR(m.p4, 0.3, 1e-15);
    const auto cl = cell_probs(kClayton1, 0.5, 0.5);
    EXPECT_NEAR(cl.p1, 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(cl.p2, 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(cl.p3, 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(cl.p4, 1.0 / 3.0, 1e-15);

    const auto grid = oracle::unit_grid(31);
    for (const auto& c : oracle::extended_zoo()) {
        for (double x : grid) {
            for (double y : grid) {
                const auto p = cell_probs(c, x, y);
                EXPECT_NEAR(p.p1 + p.p2 + p.p3 + p.p4, 1.0, 1e-14);
                for (double q : {p.p1, p.p2, p.p3, p.p4}) {
                    EXPECT_GE(q, 0.0);
                    EXPECT_LE(q, 1.0);
                }
            }
        }
    }
}

TEST(CopulaSpec, ParseAndRoundTrip) {
    EXPECT_EQ(Copula::parse("independence"), Copula::independence());
    EXPECT_EQ(Copula::parse(" clayton:2.5 ").parameter(), 2.5);
    EXPECT_EQ(Copula::parse("fgm:-0.25"), Copula::fgm(-0.25));
    for (const auto& c : oracle::extended_zoo()) EXPECT_EQ(Copula::parse(c.to_string()), c);

    EXPECT_THROW(Copula::parse("clayton"), ParseError);
    EXPECT_THROW(Copula::parse("clayton:abc"), ParseError);
    EXPECT_THROW(Copula::parse("clayton:1,5"), ParseError);
    EXPECT_THROW(Copula::parse("frank:2"), ParseError);
    EXPECT_THROW(Copula::parse("independence:1"), ParseError);
    EXPECT_THROW(Copula::parse("clayton:0"), DomainError);
    EXPECT_THROW(Copula::parse("gumbel:0.9"), DomainError);
    EXPECT_THROW(Copula::parse("fgm:1.5"), DomainError);
}

TEST(CopulaSpec, Reflection) {
    EXPECT_EQ(Copula::fgm(0.4).reflected(), Copula::fgm(0.4));
    EXPECT_EQ(Copula::comonotone().reflected(), Copula::comonotone());
    EXPECT_THROW(kClayton1.reflected(), DomainError);
    // survival identity C^(u,v) = u + v - 1 + C(1-u, 1-v) for the self-reflecting families
    for (const auto& c : {Copula::independence(), Copula::comonotone(), Copula::countermonotone(), Copula::fgm(-0.6)}) {
        for (double u : {0.1, 0.45, 0.8}) {
            for (double v : {0.2, 0.5, 0.95}) {
                EXPECT_NEAR(cdf(c.reflected(), u, v), u + v - 1.0 + cdf(c, 1.0 - u, 1.0 - v), 1e-15);
            }
        }
    }
}

TEST(CopulaSampling, ClosedFormInverseMatchesBisection) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.001, 0.999);
    for (const auto& c : {Copula::clayton(0.5), kClayton1, Copula::clayton(4.0), Copula::fgm(1.0), Copula::fgm(-0.8),
                          Copula::independence()}) {
        for (int i = 0; i < 300; ++i) {
            const double w = unit(rng);
            const double v = unit(rng);
            EXPECT_NEAR(conditional_quantile(c, w, v), conditional_quantile_bisection(c, w, v), 1e-9) << c.to_string();
        }
    }
}

TEST(CopulaSampling, BisectionInvertsPartial) {
    const auto g = Copula::gumbel(2.0);
    for (double w : {0.05, 0.5, 0.93}) {
        for (double v : {0.1, 0.6, 0.99}) {
            EXPECT_NEAR(partial_v(g, conditional_quantile(g, w, v), v), w, 1e-9);
        }
    }
}

TEST(CopulaSampling, CountermonotoneIsExactlyReflected) {
    for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
        const auto p = sample(Copula::countermonotone(), seed, 1)[0];
        EXPECT_EQ(p.v, 1.0 - p.u);
    }
    for (const auto& p : sample(Copula::comonotone(), 5, 100)) EXPECT_EQ(p.u, p.v);
}

TEST(CopulaSampling, IndependenceHasNoCorrelation) {
    const auto pairs = sample(Copula::independence(), 1, 100000);
    double su = 0, sv = 0, suu = 0, svv = 0, suv = 0;
    for (const auto& p : pairs) {
        su += p.u;
        sv += p.v;
        suu += p.u * p.u;
        svv += p.v * p.v;
        suv += p.u * p.v;
    }
    const double n = static_cast<double>(pairs.size());
    const double cov = suv / n - su / n * sv / n;
    const double corr = cov / std::sqrt((suu / n - su * su / n / n) * (svv / n - sv * sv / n / n));
    EXPECT_NEAR(corr, 0.0, 0.01);
}

TEST(CopulaSampling, EmpiricalCdfMatchesCopula) {
    for (const auto& c : {Copula::clayton(2.0), Copula::gumbel(2.0), Copula::fgm(0.8)}) {
        const auto pairs = sample(c, 1, 100000);
        const auto hits = std::count_if(pairs.begin(), pairs.end(), [](const UnitPair& p) { return p.u <= 0.5 && p.v <= 0.5; });
        const auto marg = std::count_if(pairs.begin(), pairs.end(), [](const UnitPair& p) { return p.u <= 0.3; });
        EXPECT_NEAR(static_cast<double>(hits) / 1e5, cdf(c, 0.5, 0.5), 0.005) << c.to_string();
        EXPECT_NEAR(static_cast<double>(marg) / 1e5, 0.3, 0.005) << c.to_string();
    }
}

TEST(CopulaSampling, DeterministicInSeed) {
    const auto a = sample(Copula::gumbel(1.5), 42, 50);
    const auto b = sample(Copula::gumbel(1.5), 42, 50);
    const auto c = sample(Copula::gumbel(1.5), 43, 50);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].u, b[i].u);
        EXPECT_EQ(a[i].v, b[i].v);
    }
    EXPECT_NE(a[0].u, c[0].u);
    EXPECT_THROW(sample(Copula::independence(), 1, 0), DomainError);
}

} // namespace
