#include "cli.hpp"

#include "bivos/copula.hpp"
#include "bivos/discrete_dist.hpp"
#include "bivos/error.hpp"
#include "bivos/exact_os.hpp"
#include "bivos/harness.hpp"
#include "bivos/limit_laws.hpp"
#include "bivos/text.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <optional>
#include <ostream>

namespace bivos::cli {
namespace {

using json = nlohmann::ordered_json;

enum class Format { csv, json };

struct Output {
    std::ostream& out;
    Format format = Format::csv;

    // `inputs` echoes the parsed numeric flags in JSON mode.
    void scalar(const std::string& command, json inputs, double value) const {
        if (format == Format::csv) {
            out << format_double(value) << '\n';
            return;
        }
        json doc{{"command", command}};
        doc["inputs"] = std::move(inputs);
        doc["value"] = value;
        out << doc.dump(2) << '\n';
    }
};

void add_format(CLI::App* app, Format& format) {
    app->add_option("--format", format, "Output format")
        ->transform(CLI::CheckedTransformer(std::map<std::string, Format>{{"csv", Format::csv}, {"json", Format::json}}))
        ->default_str("csv");
}

std::vector<double> parse_list(const std::string& text, std::string_view what) {
    std::vector<double> out;
    for (auto piece : split(text, ',')) out.push_back(parse_double(piece, what));
    return out;
}

std::string one_line(std::string s) {
    for (char& ch : s) {
        if (ch == '\n' || ch == '\r') ch = ' ';
    }
    return s;
}

struct Invocation {
    Format format = Format::csv;

    // shared numeric flags
    std::string copula;
    std::string limit_case;
    double u = 0.0;
    double v = 0.0;
    double x = 0.0;
    double y = 0.0;
    long long n = 0;
    long long m = 0;
    long long k = 0;
    long long r = 0;
    std::uint64_t seed = 0;
    long long dp_limit = 512;

    // copula-eval
    std::string op = "cdf";
    long long count = 1;

    // pb-pmf
    std::string probs;
    double q1 = 0.0;
    double q2 = 0.0;
    long long n1 = 0;
    long long n2 = 0;
    std::optional<long long> tail;
    bool normal = false;

    // marginal
    bool density = false;

    // joint-cdf / cond-cdf
    bool bruteforce = false;
    std::string engine = "exact";
    bool reconstruct = false;

    // converge
    std::string config_path;
    std::optional<long long> threads;

    // bound
    std::string n_list = "20,50,100,200";
    std::string lambdas = "0.25,0.5,0.75";
    std::string ranks;
    long long levels = 41;
    bool formula = false;
};

int run_copula_eval(CLI::App& sub, const Invocation& in, const Output& out) {
    const auto c = Copula::parse(in.copula);
    if (in.op == "sample") {
        if (in.count < 1) throw DomainError("sample: --count must be >= 1");
        const auto pairs = sample(c, in.seed, static_cast<std::size_t>(in.count));
        if (out.format == Format::csv) {
            out.out << "u,v\n";
            for (const auto& p : pairs) out.out << format_double(p.u) << ',' << format_double(p.v) << '\n';
        } else {
            json rows = json::array();
            for (const auto& p : pairs) rows.push_back({p.u, p.v});
            out.out << json{{"copula", c.to_string()}, {"seed", in.seed}, {"count", in.count}, {"pairs", rows}}.dump(2)
                    << '\n';
        }
        return 0;
    }

    if (sub.count("--u") == 0 || sub.count("--v") == 0) throw CLI::RequiredError("--u and --v");
    const json inputs{{"copula", c.to_string()}, {"u", in.u}, {"v", in.v}, {"op", in.op}};
    if (in.op == "cdf") {
        out.scalar("copula-eval", inputs, cdf(c, in.u, in.v));
    } else if (in.op == "partial-v") {
        out.scalar("copula-eval", inputs, partial_v(c, in.u, in.v));
    } else if (in.op == "cond-le") {
        out.scalar("copula-eval", inputs, cond_cdf_given_le(c, in.u, in.v));
    } else if (in.op == "cond-gt") {
        out.scalar("copula-eval", inputs, cond_cdf_given_gt(c, in.u, in.v));
    } else {
        const auto p = cell_probs(c, in.u, in.v);
        if (out.format == Format::csv) {
            out.out << "p1,p2,p3,p4\n"
                    << format_double(p.p1) << ',' << format_double(p.p2) << ',' << format_double(p.p3) << ','
                    << format_double(p.p4) << '\n';
        } else {
            json doc{{"command", "copula-eval"}, {"inputs", inputs}};
            doc["value"] = {{"p1", p.p1}, {"p2", p.p2}, {"p3", p.p3}, {"p4", p.p4}};
            out.out << doc.dump(2) << '\n';
        }
    }
    return 0;
}

int run_pb_pmf(CLI::App& sub, const Invocation& in, const Output& out) {
    const bool two_group = sub.count("--q1") + sub.count("--n1") + sub.count("--q2") + sub.count("--n2") > 0;
    if (two_group == (sub.count("--probs") > 0)) {
        throw CLI::ValidationError("pb-pmf", "give either --probs or the two-group flags --q1 --n1 --q2 --n2");
    }
    if (two_group && (in.n1 < 0 || in.n2 < 0)) throw DomainError("pb-pmf: group sizes must be >= 0");

    json inputs;
    if (two_group) {
        inputs = {{"q1", in.q1}, {"n1", in.n1}, {"q2", in.q2}, {"n2", in.n2}};
    } else {
        inputs = {{"probs", parse_list(in.probs, "--probs")}};
    }

    if (in.normal) {
        if (!two_group || !in.tail) throw CLI::ValidationError("pb-pmf", "--normal needs the two-group flags and --tail");
        inputs["tail"] = *in.tail;
        out.scalar("pb-pmf", inputs,
                   normal_tail_approx(in.q1, static_cast<std::size_t>(in.n1), in.q2, static_cast<std::size_t>(in.n2),
                                      *in.tail));
        return 0;
    }

    const auto pmf = two_group ? two_group_pmf(in.q1, static_cast<std::size_t>(in.n1), in.q2,
                                               static_cast<std::size_t>(in.n2))
                               : poisson_binomial_pmf(parse_list(in.probs, "--probs"));
    if (in.tail) {
        inputs["tail"] = *in.tail;
        out.scalar("pb-pmf", inputs, tail_ge(pmf, *in.tail));
        return 0;
    }
    const auto weights = pmf.weights();
    if (out.format == Format::csv) {
        out.out << "i,p\n";
        for (std::size_t i = 0; i < weights.size(); ++i) out.out << i << ',' << format_double(weights[i]) << '\n';
    } else {
        json doc{{"command", "pb-pmf"}, {"inputs", inputs}, {"pmf", weights}};
        out.out << doc.dump(2) << '\n';
    }
    return 0;
}

int run_marginal(const Invocation& in, const Output& out) {
    const json inputs{{"n", in.n}, {"m", in.m}, {"x", in.x}, {"density", in.density}};
    out.scalar("marginal", inputs, in.density ? marginal_density(in.n, in.m, in.x) : marginal_cdf(in.n, in.m, in.x));
    return 0;
}

int run_joint_cdf(const Invocation& in, const Output& out) {
    const auto c = Copula::parse(in.copula);
    const OrderStatSpec spec{in.n, in.m, in.k};
    const json inputs{{"copula", c.to_string()}, {"n", in.n}, {"m", in.m}, {"k", in.k},
                      {"x", in.x},               {"y", in.y}, {"bruteforce", in.bruteforce}};
    out.scalar("joint-cdf", inputs,
               in.bruteforce ? joint_cdf_bruteforce(c, spec, in.x, in.y)
                             : joint_cdf(c, spec, in.x, in.y, ExactOptions{in.dp_limit}));
    return 0;
}

int run_cond_cdf(const Invocation& in, const Output& out) {
    const auto c = Copula::parse(in.copula);
    const OrderStatSpec spec{in.n, in.m, in.k};
    json inputs{{"copula", c.to_string()}, {"n", in.n}, {"m", in.m}, {"k", in.k}, {"x", in.x}, {"y", in.y}};
    if (in.reconstruct) {
        const auto q = reconstruct_joint_detailed(c, spec, in.x, in.y, {}, ExactOptions{in.dp_limit});
        inputs["reconstruct"] = true;
        if (out.format == Format::json) {
            json doc{{"command", "cond-cdf"}, {"inputs", inputs}, {"value", q.value}, {"error_estimate", q.error_estimate}};
            out.out << doc.dump(2) << '\n';
        } else {
            out.out << format_double(q.value) << '\n';
        }
        return 0;
    }
    inputs["engine"] = in.engine;
    out.scalar("cond-cdf", inputs,
               conditional_cdf(c, spec, in.x, in.y, in.engine == "normal" ? TailEngine::normal : TailEngine::exact));
    return 0;
}

int run_limit_cdf(CLI::App& sub, const Invocation& in, const Output& out) {
    const auto c = LimitCase::parse(in.limit_case);
    if (sub.count("--n") > 0) {
        if (sub.count("--u") == 0 || sub.count("--v") == 0) throw CLI::RequiredError("--u and --v (with --n)");
        const auto ranks = resolve_ranks(c, in.n);
        const auto s = scaling_map(c, in.n, in.u, in.v);
        if (out.format == Format::csv) {
            out.out << "su,sv,u_rank,v_rank\n"
                    << format_double(s.su) << ',' << format_double(s.sv) << ',' << ranks.u_rank << ','
                    << ranks.v_rank << '\n';
        } else {
            json doc{{"command", "limit-cdf"},
                     {"inputs", {{"case", c.to_string()}, {"n", in.n}, {"u", in.u}, {"v", in.v}}},
                     {"su", s.su},
                     {"sv", s.sv},
                     {"u_rank", ranks.u_rank},
                     {"v_rank", ranks.v_rank}};
            out.out << doc.dump(2) << '\n';
        }
        return 0;
    }
    if (sub.count("--x") == 0 || sub.count("--y") == 0) throw CLI::RequiredError("--x and --y");
    const json inputs{{"case", c.to_string()}, {"x", in.x}, {"y", in.y}};
    out.scalar("limit-cdf", inputs, limit_joint_cdf(c, in.x, in.y));
    return 0;
}

int run_converge(CLI::App& sub, const Invocation& in, const Output& out) {
    auto config = ExperimentConfig::load(in.config_path);
    if (sub.count("--seed") > 0) config.seed = in.seed;
    if (in.threads) config.threads = static_cast<unsigned>(*in.threads);
    const auto report = run_convergence_experiment(config);
    if (out.format == Format::csv) {
        write_csv(out.out, report);
    } else {
        write_json(out.out, report);
    }
    return 0;
}

int run_bound(CLI::App& sub, const Invocation& in, const Output& out) {
    if (in.formula) {
        if (sub.count("--n") == 0 || sub.count("--r") == 0 || sub.count("--k") == 0) {
            throw CLI::RequiredError("--n, --r and --k (with --formula)");
        }
        out.scalar("bound", json{{"n", in.n}, {"r", in.r}, {"k", in.k}}, univariate_bound(in.n, in.r, in.k));
        return 0;
    }
    std::vector<BoundSpec> specs;
    if (!in.ranks.empty()) {
        for (auto piece : split(in.ranks, ',')) {
            const auto parts = split(piece, ':');
            if (parts.size() != 3) throw ParseError("--ranks expects n:r:k entries");
            specs.push_back({parse_int(parts[0], "n"), parse_int(parts[1], "r"), parse_int(parts[2], "k")});
        }
    } else {
        std::vector<long long> ns;
        for (auto piece : split(in.n_list, ',')) ns.push_back(parse_int(piece, "--n-list"));
        specs = default_bound_specs(ns, parse_list(in.lambdas, "--lambdas"));
    }
    if (in.levels < 1) throw DomainError("bound: --levels must be >= 1");
    const auto rows = run_bound_experiment(specs, probability_levels(static_cast<std::size_t>(in.levels)),
                                           ExactOptions{in.dp_limit},
                                           in.threads ? static_cast<unsigned>(*in.threads) : 0u);
    if (out.format == Format::csv) {
        write_csv(out.out, rows);
    } else {
        write_json(out.out, rows);
    }
    return 0;
}

} // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact and asymptotic laws of bivariate order statistics under a copula", "bivos"};
    app.require_subcommand(1);
    Invocation in;

    auto* copula_eval = app.add_subcommand("copula-eval", "Evaluate a copula, its derivative, conditional laws or draws");
    copula_eval->add_option("--copula", in.copula, "Copula spec")->required();
    copula_eval->add_option("--u", in.u);
    copula_eval->add_option("--v", in.v);
    copula_eval->add_option("--op", in.op)
        ->check(CLI::IsMember({"cdf", "partial-v", "cond-le", "cond-gt", "cells", "sample"}));
    copula_eval->add_option("--count", in.count, "Number of draws for --op sample");
    copula_eval->add_option("--seed", in.seed, "Seed for --op sample");
    add_format(copula_eval, in.format);

    auto* pb = app.add_subcommand("pb-pmf", "Poisson-binomial / two-group binomial pmf and tails");
    pb->add_option("--probs", in.probs, "Comma-separated success probabilities");
    pb->add_option("--q1", in.q1);
    pb->add_option("--n1", in.n1);
    pb->add_option("--q2", in.q2);
    pb->add_option("--n2", in.n2);
    pb->add_option("--tail", in.tail, "Print P(S >= m) instead of the pmf");
    pb->add_flag("--normal", in.normal, "Normal approximation of the tail (two-group only)");
    add_format(pb, in.format);

    auto* marginal = app.add_subcommand("marginal", "CDF (or density) of U_{m:n} at x");
    marginal->add_option("--n", in.n)->required();
    marginal->add_option("--m", in.m)->required();
    marginal->add_option("--x", in.x)->required();
    marginal->add_flag("--density", in.density);
    add_format(marginal, in.format);

    auto* joint = app.add_subcommand("joint-cdf", "P(U_{m:n} <= x, V_{k:n} <= y)");
    auto* cond = app.add_subcommand("cond-cdf", "P(U_{m:n} <= x | V_{k:n} = y)");
    for (auto* sub : {joint, cond}) {
        sub->add_option("--copula", in.copula)->required();
        sub->add_option("--n", in.n)->required();
        sub->add_option("--m", in.m)->required();
        sub->add_option("--k", in.k)->required();
        sub->add_option("--x", in.x)->required();
        sub->add_option("--y", in.y)->required();
        sub->add_option("--dp-limit", in.dp_limit);
        add_format(sub, in.format);
    }
    joint->add_flag("--bruteforce", in.bruteforce, "Use the multinomial enumeration oracle (n <= 12)");
    cond->add_option("--engine", in.engine)->check(CLI::IsMember({"exact", "normal"}));
    cond->add_flag("--reconstruct", in.reconstruct,
                   "Integrate the conditional CDF against the density of V_{k:n} over (0, y)");

    auto* limit = app.add_subcommand("limit-cdf", "Product limit law of a case, or its scaling map with --n");
    limit->add_option("--case", in.limit_case, "Case spec, e.g. 'case=I; k=sqrt; j=const:2'")->required();
    limit->add_option("--x", in.x);
    limit->add_option("--y", in.y);
    limit->add_option("--n", in.n);
    limit->add_option("--u", in.u);
    limit->add_option("--v", in.v);
    add_format(limit, in.format);

    auto* converge = app.add_subcommand("converge", "Run a convergence experiment from a config file");
    converge->add_option("--config", in.config_path)->required();
    converge->add_option("--seed", in.seed, "Overrides the config seed");
    converge->add_option("--threads", in.threads);
    add_format(converge, in.format);

    auto* bound = app.add_subcommand("bound", "Exact sup gap vs the univariate bound under the comonotone copula");
    bound->add_option("--n-list", in.n_list);
    bound->add_option("--lambdas", in.lambdas);
    bound->add_option("--ranks", in.ranks, "Explicit n:r:k entries, comma separated");
    bound->add_option("--levels", in.levels, "Probability levels per axis");
    bound->add_option("--dp-limit", in.dp_limit);
    bound->add_option("--threads", in.threads);
    bound->add_flag("--formula", in.formula, "Print the bound for --n --r --k only");
    bound->add_option("--n", in.n);
    bound->add_option("--r", in.r);
    bound->add_option("--k", in.k);
    add_format(bound, in.format);

    std::vector<std::string> argv_store{"bivos"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        const Output output{out, in.format};
        if (*copula_eval) return run_copula_eval(*copula_eval, in, output);
        if (*pb) return run_pb_pmf(*pb, in, output);
        if (*marginal) return run_marginal(in, output);
        if (*joint) return run_joint_cdf(in, output);
        if (*cond) return run_cond_cdf(in, output);
        if (*limit) return run_limit_cdf(*limit, in, output);
        if (*converge) return run_converge(*converge, in, output);
        if (*bound) return run_bound(*bound, in, output);
        return 2;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << one_line(e.what()) << '\n';
        return 2;
    } catch (const ParseError& e) {
        err << "usage error: " << one_line(e.what()) << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.code() << ": " << one_line(e.what()) << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: internal: " << one_line(e.what()) << '\n';
        return 1;
    }
}

} // namespace bivos::cli
