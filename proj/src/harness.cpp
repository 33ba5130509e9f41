#include "bivos/harness.hpp"

#include "bivos/error.hpp"
#include "bivos/rng.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace bivos {
namespace {

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

// Number of grid points <= value, i.e. the first grid index whose CDF counts it.
std::size_t first_covering(const std::vector<double>& axis, double value) {
    return static_cast<std::size_t>(std::lower_bound(axis.begin(), axis.end(), value) - axis.begin());
}

} // namespace

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    const auto workers = static_cast<std::size_t>(std::min<std::size_t>(threads, count));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }

    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

std::vector<std::vector<ScaledPair>> simulate_scaled_pairs(const Copula& copula, std::span<const LimitCase> cases,
                                                           long long n, long long replicates, std::uint64_t seed,
                                                           unsigned threads) {
    if (replicates < 1) throw DomainError("simulate_scaled_pairs: replicates must be >= 1");
    std::vector<CaseRanks> ranks;
    std::vector<ScalingMap> maps;
    for (const auto& c : cases) {
        ranks.push_back(resolve_ranks(c, n));
        maps.push_back(scaling_for(c, n));
    }

    const auto reps = static_cast<std::size_t>(replicates);
    std::vector<std::vector<ScaledPair>> out(cases.size(), std::vector<ScaledPair>(reps));
    // Blocks of replicates share scratch buffers; block boundaries never
    // influence the draws.
    constexpr std::size_t kBlock = 256;
    const std::size_t blocks = (reps + kBlock - 1) / kBlock;
    parallel_for(blocks, threads, [&](std::size_t block) {
        std::vector<double> us(static_cast<std::size_t>(n));
        std::vector<double> vs(static_cast<std::size_t>(n));
        const std::size_t end = std::min(reps, (block + 1) * kBlock);
        for (std::size_t i = block * kBlock; i < end; ++i) {
            Engine rng(mix64(seed, i));
            sample_into(copula, rng, us, vs);
            for (std::size_t c = 0; c < cases.size(); ++c) {
                const auto ur = us.begin() + (ranks[c].u_rank - 1);
                const auto vr = vs.begin() + (ranks[c].v_rank - 1);
                std::nth_element(us.begin(), ur, us.end());
                std::nth_element(vs.begin(), vr, vs.end());
                out[c][i] = maps[c].apply(*ur, *vr);
            }
        }
    });
    return out;
}

std::vector<ScaledPair> simulate_scaled_pairs(const ExperimentConfig& config, long long n) {
    config.validate();
    if (std::find(config.n_list.begin(), config.n_list.end(), n) == config.n_list.end()) {
        throw DomainError("simulate_scaled_pairs: n=" + std::to_string(n) + " is not in n_list");
    }
    const LimitCase cases[] = {config.limit_case};
    return std::move(simulate_scaled_pairs(config.copula, cases, n, config.replicates, config.seed,
                                           config.threads)[0]);
}

CdfTable empirical_cdf_grid(std::span<const ScaledPair> pairs, const Grid& grid) {
    if (pairs.empty()) throw DomainError("empirical_cdf_grid: no pairs");
    const std::size_t nx = grid.x.size();
    const std::size_t ny = grid.y.size();

    // counts[ix][iy]: pairs whose first covering grid point is (ix, iy);
    // index nx / ny collects pairs above the whole axis.
    std::vector<double> counts((nx + 1) * (ny + 1), 0.0);
    for (const auto& p : pairs) {
        counts[first_covering(grid.x, p.su) * (ny + 1) + first_covering(grid.y, p.sv)] += 1.0;
    }
    // 2-D prefix sums turn cell counts into #{su <= x_ix, sv <= y_iy}.
    for (std::size_t ix = 0; ix <= nx; ++ix) {
        for (std::size_t iy = 0; iy <= ny; ++iy) {
            double& c = counts[ix * (ny + 1) + iy];
            if (ix > 0) c += counts[(ix - 1) * (ny + 1) + iy];
            if (iy > 0) c += counts[ix * (ny + 1) + iy - 1];
            if (ix > 0 && iy > 0) c -= counts[(ix - 1) * (ny + 1) + iy - 1];
        }
    }

    const double total = static_cast<double>(pairs.size());
    CdfTable table{std::vector<double>(nx * ny), std::vector<double>(nx), std::vector<double>(ny)};
    for (std::size_t ix = 0; ix < nx; ++ix) {
        for (std::size_t iy = 0; iy < ny; ++iy) table.joint[ix * ny + iy] = counts[ix * (ny + 1) + iy] / total;
        table.u[ix] = counts[ix * (ny + 1) + ny] / total;
    }
    for (std::size_t iy = 0; iy < ny; ++iy) table.v[iy] = counts[nx * (ny + 1) + iy] / total;
    return table;
}

CdfTable exact_cdf_grid(const Copula& copula, const LimitCase& c, long long n, const Grid& grid,
                        const ExactOptions& options, unsigned threads) {
    if (n > options.dp_limit) {
        throw ResourceError("exact mode: n=" + std::to_string(n) + " exceeds the DP limit " +
                            std::to_string(options.dp_limit));
    }
    const auto ranks = resolve_ranks(c, n);
    const auto map = scaling_for(c, n);
    const std::size_t nx = grid.x.size();
    const std::size_t ny = grid.y.size();

    std::vector<double> us(nx);
    std::vector<double> vs(ny);
    CdfTable table{std::vector<double>(nx * ny), std::vector<double>(nx), std::vector<double>(ny)};
    for (std::size_t ix = 0; ix < nx; ++ix) {
        us[ix] = clamp01(map.u.invert(grid.x[ix]));
        table.u[ix] = marginal_cdf(n, ranks.u_rank, us[ix]);
    }
    for (std::size_t iy = 0; iy < ny; ++iy) {
        vs[iy] = clamp01(map.v.invert(grid.y[iy]));
        table.v[iy] = marginal_cdf(n, ranks.v_rank, vs[iy]);
    }
    const OrderStatSpec spec{n, ranks.u_rank, ranks.v_rank};
    parallel_for(nx * ny, threads, [&](std::size_t idx) {
        table.joint[idx] = joint_cdf(copula, spec, us[idx / ny], vs[idx % ny], options);
    });
    return table;
}

double mc_standard_error(long long replicates) {
    constexpr double delta = 0.05;
    return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(replicates)));
}

GapRow gap_row(const CdfTable& table, const LimitLaw& law, const CaseRanks& ranks, const Grid& grid,
               double mc_se) {
    GapRow row;
    row.n = ranks.n;
    row.k = ranks.k;
    row.j = ranks.j;
    row.mc_se = mc_se;
    row.k_over_n = ranks.k_over_n();
    row.j_over_sqrt_k = ranks.j_over_sqrt_k();

    std::vector<double> lu(grid.x.size());
    std::vector<double> lv(grid.y.size());
    for (std::size_t ix = 0; ix < grid.x.size(); ++ix) {
        lu[ix] = law.u_cdf(grid.x[ix]);
        row.sup_u_limit_error = std::max(row.sup_u_limit_error, std::abs(table.u[ix] - lu[ix]));
    }
    for (std::size_t iy = 0; iy < grid.y.size(); ++iy) {
        lv[iy] = law.v_cdf(grid.y[iy]);
        row.sup_v_limit_error = std::max(row.sup_v_limit_error, std::abs(table.v[iy] - lv[iy]));
    }
    for (std::size_t ix = 0; ix < grid.x.size(); ++ix) {
        for (std::size_t iy = 0; iy < grid.y.size(); ++iy) {
            const double h = table.at(ix, iy);
            row.sup_gap_product = std::max(row.sup_gap_product, std::abs(h - table.u[ix] * table.v[iy]));
            row.sup_gap_limit = std::max(row.sup_gap_limit, std::abs(h - lu[ix] * lv[iy]));
        }
    }
    return row;
}

std::vector<GapReport> run_convergence_experiments(const ExperimentConfig& base, std::span<const LimitCase> cases) {
    base.validate();
    std::vector<GapReport> reports;
    std::vector<LimitLaw> laws;
    std::vector<Grid> grids;
    for (const auto& c : cases) {
        reports.push_back({base.copula.to_string(), c.to_string(), base.mode, base.seed,
                           base.mode == Mode::exact ? 0 : base.replicates, {}});
        laws.push_back(limit_law(c));
        auto config = base;
        config.limit_case = c;
        grids.push_back(config.grid());
    }

    const ExactOptions options{base.dp_limit};
    for (const long long n : base.n_list) {
        if (base.mode == Mode::exact) {
            for (std::size_t c = 0; c < cases.size(); ++c) {
                const auto table = exact_cdf_grid(base.copula, cases[c], n, grids[c], options, base.threads);
                reports[c].rows.push_back(gap_row(table, laws[c], resolve_ranks(cases[c], n), grids[c], 0.0));
            }
            continue;
        }
        const auto pairs =
            simulate_scaled_pairs(base.copula, cases, n, base.replicates, base.seed, base.threads);
        for (std::size_t c = 0; c < cases.size(); ++c) {
            const auto table = empirical_cdf_grid(pairs[c], grids[c]);
            reports[c].rows.push_back(gap_row(table, laws[c], resolve_ranks(cases[c], n), grids[c],
                                              mc_standard_error(base.replicates)));
        }
    }
    return reports;
}

GapReport run_convergence_experiment(const ExperimentConfig& config) {
    const LimitCase cases[] = {config.limit_case};
    return std::move(run_convergence_experiments(config, cases)[0]);
}

std::vector<BoundSpec> default_bound_specs(std::span<const long long> n_list, std::span<const double> lambdas) {
    std::vector<BoundSpec> out;
    for (const long long n : n_list) {
        const RankRule k_rule{RankRule::Kind::sqrt, 0.0};
        for (const double lambda : lambdas) {
            out.push_back({n, RankRule::fraction(lambda).evaluate(n), k_rule.evaluate(n)});
        }
    }
    return out;
}

std::vector<double> probability_levels(std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = static_cast<double>(i + 1) / static_cast<double>(count + 1);
    }
    return out;
}

std::vector<BoundRow> run_bound_experiment(std::span<const BoundSpec> specs, std::span<const double> levels,
                                           const ExactOptions& options, unsigned threads) {
    for (double p : levels) {
        if (!(p > 0.0 && p < 1.0)) throw DomainError("run_bound_experiment: probability levels must lie in (0,1)");
    }
    const auto comonotone = Copula::comonotone();
    std::vector<BoundRow> rows;
    for (const auto& s : specs) {
        const double bound = univariate_bound(s.n, s.r, s.k);
        const long long upper = s.n - s.k + 1;
        if (s.n > options.dp_limit) {
            throw ResourceError("run_bound_experiment: n=" + std::to_string(s.n) + " exceeds the DP limit");
        }

        const std::size_t g = levels.size();
        std::vector<double> xs(g), ys(g), fx(g), fy(g);
        for (std::size_t i = 0; i < g; ++i) {
            xs[i] = boost::math::ibeta_inv(static_cast<double>(s.r), static_cast<double>(s.n - s.r + 1), levels[i]);
            ys[i] = boost::math::ibeta_inv(static_cast<double>(upper), static_cast<double>(s.n - upper + 1), levels[i]);
            fx[i] = marginal_cdf(s.n, s.r, xs[i]);
            fy[i] = marginal_cdf(s.n, upper, ys[i]);
        }
        std::vector<double> gaps(g * g);
        const OrderStatSpec spec{s.n, s.r, upper};
        parallel_for(g * g, threads, [&](std::size_t idx) {
            const std::size_t ix = idx / g;
            const std::size_t iy = idx % g;
            gaps[idx] = std::abs(joint_cdf(comonotone, spec, xs[ix], ys[iy], options) - fx[ix] * fy[iy]);
        });
        const double sup_gap = gaps.empty() ? 0.0 : *std::max_element(gaps.begin(), gaps.end());
        rows.push_back({s.n, s.r, s.k, sup_gap, bound, std::isfinite(bound) ? sup_gap / bound : 0.0});
    }
    return rows;
}

} // namespace bivos
