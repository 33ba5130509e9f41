#include "bivos/harness.hpp"
#include "bivos/text.hpp"

#include <json.hpp>

#include <ostream>

namespace bivos {

void write_csv(std::ostream& out, const GapReport& report) {
    out << "n,k,j,sup_gap_product,sup_gap_limit,mc_se,k_over_n,j_over_sqrt_k\n";
    for (const auto& r : report.rows) {
        out << r.n << ',' << r.k << ',' << r.j << ',' << format_double(r.sup_gap_product) << ','
            << format_double(r.sup_gap_limit) << ',' << format_double(r.mc_se) << ','
            << format_double(r.k_over_n) << ',' << format_double(r.j_over_sqrt_k) << '\n';
    }
}

void write_json(std::ostream& out, const GapReport& report) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"n", r.n},
                        {"k", r.k},
                        {"j", r.j},
                        {"sup_gap_product", r.sup_gap_product},
                        {"sup_gap_limit", r.sup_gap_limit},
                        {"mc_se", r.mc_se},
                        {"k_over_n", r.k_over_n},
                        {"j_over_sqrt_k", r.j_over_sqrt_k}});
    }
    nlohmann::ordered_json doc{{"copula", report.copula},
                               {"case", report.limit_case},
                               {"mode", mode_name(report.mode)},
                               {"seed", report.seed},
                               {"replicates", report.replicates},
                               {"rows", rows}};
    out << doc.dump(2) << '\n';
}

void write_csv(std::ostream& out, std::span<const BoundRow> rows) {
    out << "n,r,k,sup_gap,bound,ratio\n";
    for (const auto& r : rows) {
        out << r.n << ',' << r.r << ',' << r.k << ',' << format_double(r.sup_gap) << ','
            << format_double(r.bound) << ',' << format_double(r.ratio) << '\n';
    }
}

void write_json(std::ostream& out, std::span<const BoundRow> rows) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        // JSON has no infinity; an unbounded bound is written as null.
        nlohmann::ordered_json bound = std::isfinite(r.bound) ? nlohmann::ordered_json(r.bound) : nullptr;
        doc.push_back({{"n", r.n}, {"r", r.r}, {"k", r.k}, {"sup_gap", r.sup_gap}, {"bound", bound}, {"ratio", r.ratio}});
    }
    out << doc.dump(2) << '\n';
}

} // namespace bivos
