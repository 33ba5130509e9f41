#include "cli.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

struct Result {
    int status;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int status = bivos::cli::dispatch(args, out, err);
    return {status, out.str(), err.str()};
}

double scalar(const Result& r) {
    EXPECT_EQ(r.status, 0) << r.err;
    return std::stod(r.out);
}

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << text;
    return path;
}

TEST(Cli, JointCdf) {
    const auto r = run({"joint-cdf", "--copula", "independence", "--n", "3", "--m", "1", "--k", "1", "--x", "0.5",
                        "--y", "0.5"});
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "0.765625\n");
    EXPECT_EQ(scalar(run({"joint-cdf", "--copula", "comonotone", "--n", "2", "--m", "2", "--k", "2", "--x", "0.5",
                          "--y", "0.5", "--bruteforce"})),
              0.25);
}

TEST(Cli, CondCdfMaximaClosedForm) {
    const double c = 1.0 / 3.0;
    const double want = 4.0 / 9.0 * std::pow(c / 0.5, 4);
    EXPECT_NEAR(scalar(run({"cond-cdf", "--copula", "clayton:1", "--n", "5", "--m", "5", "--k", "5", "--x", "0.5",
                            "--y", "0.5"})),
                want, 1e-15);
    EXPECT_NEAR(scalar(run({"cond-cdf", "--copula", "clayton:1", "--n", "5", "--m", "3", "--k", "2", "--x", "0.4",
                            "--y", "0.5", "--reconstruct"})),
                0.29203070149342536, 1e-8);
}

TEST(Cli, ScalarSubcommands) {
    EXPECT_EQ(scalar(run({"copula-eval", "--copula", "clayton:1", "--u", "0.5", "--v", "0.5", "--op", "partial-v"})),
              4.0 / 9.0);
    EXPECT_EQ(scalar(run({"marginal", "--n", "5", "--m", "3", "--x", "0.5", "--density"})), 1.875);
    EXPECT_NEAR(scalar(run({"marginal", "--n", "3", "--m", "2", "--x", "0.5"})), 0.5, 1e-15);
    EXPECT_NEAR(scalar(run({"pb-pmf", "--probs", "0.09,0.82", "--tail", "1"})), 1.0 - 0.91 * 0.18, 1e-15);
    EXPECT_EQ(scalar(run({"limit-cdf", "--case", "case=V", "--x", "0", "--y", "0"})), 0.25);
    EXPECT_NEAR(scalar(run({"bound", "--formula", "--n", "100", "--r", "50", "--k", "10"})), 0.3492151478847891,
                1e-15);
}

TEST(Cli, Tables) {
    auto r = run({"pb-pmf", "--probs", "0.1,0.9"});
    EXPECT_EQ(r.out.substr(0, 4), "i,p\n");
    std::istringstream rows(r.out.substr(4));
    const double want[] = {0.09, 0.82, 0.09};
    for (int i = 0; i < 3; ++i) {
        std::string line;
        std::getline(rows, line);
        EXPECT_EQ(line.substr(0, 2), std::to_string(i) + ",");
        EXPECT_NEAR(std::stod(line.substr(2)), want[i], 1e-15);
    }
    r = run({"copula-eval", "--copula", "comonotone", "--u", "0.2", "--v", "0.5", "--op", "cells"});
    EXPECT_EQ(r.out.substr(0, 12), "p1,p2,p3,p4\n");
    r = run({"limit-cdf", "--case", "case=I; k=const:4; j=const:1", "--n", "99", "--u", "0.96", "--v", "1"});
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out.substr(0, 21), "su,sv,u_rank,v_rank\n0");
    r = run({"copula-eval", "--copula", "clayton:2", "--op", "sample", "--count", "3", "--seed", "5"});
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 4);
    EXPECT_EQ(r.out, run({"copula-eval", "--copula", "clayton:2", "--op", "sample", "--count", "3", "--seed", "5"}).out);
}

TEST(Cli, JsonEchoesInputs) {
    const auto r = run({"joint-cdf", "--copula", "clayton:2", "--n", "6", "--m", "3", "--k", "4", "--x", "0.3", "--y",
                        "0.7", "--format", "json"});
    ASSERT_EQ(r.status, 0) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_EQ(doc["command"], "joint-cdf");
    EXPECT_EQ(doc["inputs"]["copula"], "clayton:2");
    EXPECT_EQ(doc["inputs"]["n"], 6);
    EXPECT_EQ(doc["inputs"]["x"].get<double>(), 0.3);
    EXPECT_EQ(doc["inputs"]["y"].get<double>(), 0.7);
    EXPECT_NEAR(doc["value"].get<double>(), 0.23353669796729902, 1e-12);
}

TEST(Cli, UsageErrors) {
    for (const std::vector<std::string>& args :
         {std::vector<std::string>{}, {"nope"}, {"joint-cdf", "--copula", "independence"},
          {"marginal", "--n", "3", "--m", "1", "--x", "0.5", "--bogus", "1"}, {"marginal", "--n", "x", "--m", "1", "--x", "0.5"},
          {"copula-eval", "--copula", "frank:1", "--u", "0.1", "--v", "0.2"},
          {"limit-cdf", "--case", "case=VII", "--x", "0", "--y", "0"}, {"pb-pmf", "--probs", "0.5", "--q1", "0.2"},
          {"joint-cdf", "--copula", "independence", "--n", "3", "--m", "1", "--k", "1", "--x", "0.5", "--y", "0.5",
           "--format", "xml"}}) {
        const auto r = run(args);
        EXPECT_EQ(r.status, 2) << (args.empty() ? "" : args[0]);
        EXPECT_TRUE(r.out.empty());
        EXPECT_FALSE(r.err.empty());
    }
}

TEST(Cli, DomainErrors) {
    auto r = run({"joint-cdf", "--copula", "independence", "--n", "3", "--m", "4", "--k", "1", "--x", "0.5", "--y",
                  "0.5"});
    EXPECT_EQ(r.status, 1);
    EXPECT_EQ(r.err.rfind("error: domain: ", 0), 0U) << r.err;
    EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);

    r = run({"joint-cdf", "--copula", "independence", "--n", "600", "--m", "4", "--k", "1", "--x", "0.5", "--y", "0.5"});
    EXPECT_EQ(r.status, 1);
    EXPECT_EQ(r.err.rfind("error: resource: ", 0), 0U) << r.err;

    r = run({"cond-cdf", "--copula", "comonotone", "--n", "3", "--m", "2", "--k", "2", "--x", "0.4", "--y", "0.4"});
    EXPECT_EQ(r.status, 1);
    EXPECT_EQ(r.err.rfind("error: non_differentiable: ", 0), 0U) << r.err;

    r = run({"limit-cdf", "--case", "case=I; j=const:9", "--n", "4", "--u", "0.5", "--v", "0.5"});
    EXPECT_EQ(r.status, 1);
    EXPECT_EQ(r.err.rfind("error: rank_rule: ", 0), 0U) << r.err;

    r = run({"converge", "--config", "/nonexistent/bivos.cfg"});
    EXPECT_EQ(r.status, 1);
}

TEST(Cli, HelpExitsZero) {
    EXPECT_EQ(run({"--help"}).status, 0);
    EXPECT_EQ(run({"joint-cdf", "--help"}).status, 0);
}

TEST(Cli, ConvergeExactIndependence) {
    const auto path = write_temp("bivos_cli_indep.cfg",
                                 "copula = independence\ncase = case=III\nn_list = 10, 50\nmode = exact\n");
    const auto r = run({"converge", "--config", path.string()});
    ASSERT_EQ(r.status, 0) << r.err;
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    EXPECT_EQ(line, "n,k,j,sup_gap_product,sup_gap_limit,mc_se,k_over_n,j_over_sqrt_k");
    int rows = 0;
    while (std::getline(lines, line)) {
        std::vector<std::string> fields;
        std::stringstream ss(line);
        for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
        ASSERT_EQ(fields.size(), 8U);
        EXPECT_LE(std::stod(fields[3]), 1e-10);
        ++rows;
    }
    EXPECT_EQ(rows, 2);
}

TEST(Cli, ConvergeIsDeterministic) {
    const auto path = write_temp("bivos_cli_mc.cfg",
                                 "copula = clayton:2\ncase = case=V\nn_list = 60, 120\nreplicates = 300\nseed = 7\n");
    const auto a = run({"converge", "--config", path.string()});
    const auto b = run({"converge", "--config", path.string(), "--threads", "2"});
    ASSERT_EQ(a.status, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    const auto c = run({"converge", "--config", path.string(), "--seed", "8"});
    EXPECT_NE(a.out, c.out);
    const auto j = run({"converge", "--config", path.string(), "--format", "json"});
    const auto doc = nlohmann::json::parse(j.out);
    EXPECT_EQ(doc["seed"], 7);
    EXPECT_EQ(doc["rows"].size(), 2U);
}

TEST(Cli, BoundTable) {
    const auto r = run({"bound", "--ranks", "50:25:7,10:4:7", "--levels", "9"});
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "n,r,k,sup_gap,bound,ratio");
    EXPECT_NE(r.out.find("10,4,7,"), std::string::npos);
    EXPECT_NE(r.out.find(",inf,0\n"), std::string::npos);
}

} // namespace
