#include "bivos/error.hpp"
#include "bivos/harness.hpp"
#include "bivos/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace bivos {
namespace {

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = lo;
        return out;
    }
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return out;
}

std::vector<double> parse_axis(std::string_view text, std::string_view key) {
    text = trim(text);
    if (text.starts_with("linspace:")) {
        const auto parts = split(text.substr(9), ':');
        if (parts.size() != 3) throw ParseError(std::string(key) + ": expected linspace:<lo>:<hi>:<count>");
        const double lo = parse_double(parts[0], key);
        const double hi = parse_double(parts[1], key);
        const auto count = parse_int(parts[2], key);
        if (count < 1 || !(lo <= hi)) throw ParseError(std::string(key) + ": invalid linspace");
        return linspace(lo, hi, static_cast<std::size_t>(count));
    }
    std::vector<double> out;
    for (auto piece : split(text, ',')) out.push_back(parse_double(piece, key));
    return out;
}

} // namespace

const char* mode_name(Mode mode) noexcept {
    return mode == Mode::exact ? "exact" : "monte_carlo";
}

std::vector<double> default_axis(bool gj_component) {
    return gj_component ? linspace(-12.0, 0.5, 41) : linspace(-4.0, 4.0, 41);
}

Grid default_grid(const LimitCase& c) {
    return {default_axis(false), default_axis(c.v_is_extreme())};
}

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
    ExperimentConfig config;
    std::set<std::string, std::less<>> seen;
    bool have_copula = false;
    bool have_case = false;

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = std::min(text.find('\n', start), text.size());
        auto line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("config line " + std::to_string(line_no) + ": expected key=value");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (!seen.insert(std::string(key)).second) {
            throw ParseError("config line " + std::to_string(line_no) + ": duplicate key '" + std::string(key) + "'");
        }

        if (key == "copula") {
            config.copula = Copula::parse(value);
            have_copula = true;
        } else if (key == "case") {
            config.limit_case = LimitCase::parse(value);
            have_case = true;
        } else if (key == "n_list") {
            for (auto piece : split(value, ',')) config.n_list.push_back(parse_int(piece, "n_list"));
        } else if (key == "replicates") {
            config.replicates = parse_int(value, "replicates");
        } else if (key == "grid_x") {
            config.grid_x = parse_axis(value, "grid_x");
        } else if (key == "grid_y") {
            config.grid_y = parse_axis(value, "grid_y");
        } else if (key == "seed") {
            config.seed = parse_u64(value, "seed");
        } else if (key == "mode") {
            if (value == "monte_carlo") config.mode = Mode::monte_carlo;
            else if (value == "exact") config.mode = Mode::exact;
            else throw ParseError("mode must be monte_carlo or exact, got '" + std::string(value) + "'");
        } else if (key == "dp_limit") {
            config.dp_limit = parse_int(value, "dp_limit");
        } else if (key == "threads") {
            config.threads = static_cast<unsigned>(parse_int(value, "threads"));
        } else {
            throw ParseError("config line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
        }
    }
    if (!have_copula) throw ParseError("config: missing key 'copula'");
    if (!have_case) throw ParseError("config: missing key 'case'");
    config.validate();
    return config;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("io", "cannot open config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

Grid ExperimentConfig::grid() const {
    auto g = default_grid(limit_case);
    if (!grid_x.empty()) g.x = grid_x;
    if (!grid_y.empty()) g.y = grid_y;
    return g;
}

void ExperimentConfig::validate() const {
    if (n_list.empty()) throw ParseError("config: n_list is empty");
    for (auto n : n_list) {
        if (n < 1) throw ParseError("config: sample sizes must be >= 1");
    }
    if (replicates < 1) throw ParseError("config: replicates must be >= 1");
    if (dp_limit < 1) throw ParseError("config: dp_limit must be >= 1");
    for (const auto* axis : {&grid_x, &grid_y}) {
        for (double p : *axis) {
            if (!std::isfinite(p)) throw ParseError("config: grid points must be finite");
        }
        if (!std::is_sorted(axis->begin(), axis->end())) throw ParseError("config: grid points must be sorted");
    }
}

} // namespace bivos
