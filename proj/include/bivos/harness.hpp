#pragma once

#include "bivos/copula.hpp"
#include "bivos/exact_os.hpp"
#include "bivos/limit_laws.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bivos {

enum class Mode { monte_carlo, exact };

const char* mode_name(Mode mode) noexcept;

/// Evaluation points for the scaled coordinates (su, sv).
struct Grid {
    std::vector<double> x;
    std::vector<double> y;
};

/// 41 points on [-4, 4] for a normal component, on [-12, 0.5] for a G_j component.
std::vector<double> default_axis(bool gj_component);
Grid default_grid(const LimitCase& c);

/// Experiment description. Read from a key=value file, one key per line, `#`
/// starts a comment:
///
///   copula     = clayton:2
///   case       = V; k=n23; j=log          (value is a case string)
///   n_list     = 500, 2000, 8000
///   replicates = 50000
///   seed       = 0
///   mode       = monte_carlo | exact
///   grid_x     = -1, 0, 1  |  linspace:<lo>:<hi>:<count>     (optional)
///   grid_y     = ...                                           (optional)
///   dp_limit   = 512                                           (optional)
///   threads    = 0                                             (optional, 0 = all cores)
struct ExperimentConfig {
    Copula copula = Copula::independence();
    LimitCase limit_case = LimitCase::defaults(CaseId::I);
    std::vector<long long> n_list;
    long long replicates = 1000;
    std::vector<double> grid_x;
    std::vector<double> grid_y;
    std::uint64_t seed = 0;
    Mode mode = Mode::monte_carlo;
    long long dp_limit = 512;
    unsigned threads = 0;

    static ExperimentConfig parse(std::string_view text);
    static ExperimentConfig load(const std::filesystem::path& path);

    /// Explicit grid where given, the case default otherwise.
    Grid grid() const;

    /// Throws on an empty n_list, replicates < 1 or an unsorted grid.
    void validate() const;
};

/// Scaled pairs for every replicate of `config` at sample size n. Replicate i
/// draws its n observations from an engine seeded with mix64(seed, i), so
/// results do not depend on thread count or on the order of n_list.
std::vector<ScaledPair> simulate_scaled_pairs(const ExperimentConfig& config, long long n);

/// As above for several cases at once, sharing each replicate's sample. The
/// pairs for case c equal simulate_scaled_pairs with that case alone.
std::vector<std::vector<ScaledPair>> simulate_scaled_pairs(const Copula& copula,
                                                           std::span<const LimitCase> cases, long long n,
                                                           long long replicates, std::uint64_t seed,
                                                           unsigned threads = 0);

/// Joint and marginal CDF values on a grid. `joint` is row-major in x.
struct CdfTable {
    std::vector<double> joint;
    std::vector<double> u;
    std::vector<double> v;

    double at(std::size_t ix, std::size_t iy) const { return joint[ix * v.size() + iy]; }
};

/// Empirical H(x,y), F(x), G(y) of the pairs on the grid. Throws DomainError
/// for an empty sample.
CdfTable empirical_cdf_grid(std::span<const ScaledPair> pairs, const Grid& grid);

/// Exact counterpart: the grid is pulled back through the inverse scaling map
/// and evaluated with joint_cdf / marginal_cdf.
CdfTable exact_cdf_grid(const Copula& copula, const LimitCase& c, long long n, const Grid& grid,
                        const ExactOptions& options = {}, unsigned threads = 0);

struct GapRow {
    long long n = 0;
    long long k = 0;
    long long j = 0;
    double sup_gap_product = 0.0; ///< sup |H - F G|
    double sup_gap_limit = 0.0;   ///< sup |H - limit joint CDF|
    double mc_se = 0.0;           ///< sqrt(ln(2/0.05) / (2 R)); 0 in exact mode
    double k_over_n = 0.0;
    double j_over_sqrt_k = 0.0;
    double sup_u_limit_error = 0.0; ///< sup |F - limit u-marginal|
    double sup_v_limit_error = 0.0; ///< sup |G - limit v-marginal|
};

struct GapReport {
    std::string copula;
    std::string limit_case;
    Mode mode = Mode::monte_carlo;
    std::uint64_t seed = 0;
    long long replicates = 0;
    std::vector<GapRow> rows;
};

/// DKW-type half width sqrt(ln(2/delta) / (2 replicates)), delta = 0.05.
double mc_standard_error(long long replicates);

GapRow gap_row(const CdfTable& table, const LimitLaw& law, const CaseRanks& ranks, const Grid& grid,
               double mc_se);

GapReport run_convergence_experiment(const ExperimentConfig& config);

/// One report per case; each equals run_convergence_experiment on `base`
/// with its limit_case replaced. Monte Carlo samples are shared across cases.
std::vector<GapReport> run_convergence_experiments(const ExperimentConfig& base,
                                                   std::span<const LimitCase> cases);

void write_csv(std::ostream& out, const GapReport& report);
void write_json(std::ostream& out, const GapReport& report);

/// Order statistics (U_{r:n}, U_{n-k+1:n}) of one sample.
struct BoundSpec {
    long long n;
    long long r;
    long long k;
};

struct BoundRow {
    long long n;
    long long r;
    long long k;
    double sup_gap;
    double bound;
    double ratio; ///< sup_gap / bound, 0 when the bound is infinite
};

/// (r, k) = (floor(lambda n), floor(sqrt n)) for every n and lambda.
std::vector<BoundSpec> default_bound_specs(std::span<const long long> n_list, std::span<const double> lambdas);

/// i / (count + 1), i = 1..count.
std::vector<double> probability_levels(std::size_t count);

/// Exact sup gap |P(U_{r:n} <= x, U_{n-k+1:n} <= y) - P(U_{r:n} <= x) P(U_{n-k+1:n} <= y)|
/// under the comonotone copula. Each axis is evaluated at the marginal quantiles
/// of its order statistic at `levels`.
std::vector<BoundRow> run_bound_experiment(std::span<const BoundSpec> specs, std::span<const double> levels,
                                           const ExactOptions& options = {}, unsigned threads = 0);

void write_csv(std::ostream& out, std::span<const BoundRow> rows);
void write_json(std::ostream& out, std::span<const BoundRow> rows);

/// Runs body(i) for i in [0, count) on up to `threads` workers (0 = all cores).
/// The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

} // namespace bivos
