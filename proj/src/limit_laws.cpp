#include "bivos/limit_laws.hpp"

#include "bivos/error.hpp"
#include "bivos/text.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <numbers>

namespace bivos {

double std_normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double gj_cdf(int j, double x) {
    if (j < 1) throw DomainError("gj_cdf: j must be >= 1");
    if (x > 0.0) return 1.0;
    const double t = -x;
    if (!std::isfinite(t)) return 0.0;
    if (t > 700.0) return boost::math::gamma_q(static_cast<double>(j), t);
    double term = std::exp(x);
    double sum = term;
    for (int i = 1; i < j; ++i) {
        term *= t / i;
        sum += term;
    }
    return std::min(sum, 1.0);
}

RankRule RankRule::fraction(double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0)) {
        throw ParseError("frac rule needs lambda in (0,1), got " + format_double(lambda));
    }
    return {Kind::frac, lambda};
}

RankRule RankRule::parse(std::string_view text) {
    text = trim(text);
    if (text == "sqrt") return {Kind::sqrt, 0.0};
    if (text == "n23") return {Kind::n23, 0.0};
    if (text == "log") return {Kind::log, 0.0};
    if (text.starts_with("frac:")) return fraction(parse_double(text.substr(5), "frac:<lambda>"));
    if (text.starts_with("const:")) {
        const auto j = parse_int(text.substr(6), "const:<j>");
        if (j < 1) throw ParseError("const rule needs j >= 1");
        return constant(j);
    }
    throw ParseError("unknown rank rule '" + std::string(text) + "'");
}

long long RankRule::evaluate(long long n) const {
    switch (kind) {
    case Kind::sqrt: {
        auto r = static_cast<long long>(std::sqrt(static_cast<double>(n)));
        while (r * r > n) --r;
        while ((r + 1) * (r + 1) <= n) ++r;
        return r;
    }
    case Kind::n23: {
        const long long n2 = n * n;
        auto r = static_cast<long long>(std::cbrt(static_cast<double>(n2)));
        while (r > 0 && r * r * r > n2) --r;
        while ((r + 1) * (r + 1) * (r + 1) <= n2) ++r;
        return r;
    }
    case Kind::log: return static_cast<long long>(std::ceil(std::log(static_cast<double>(n))));
    case Kind::frac: return static_cast<long long>(std::floor(value * static_cast<double>(n) + 1e-9));
    case Kind::constant: return static_cast<long long>(value);
    }
    return 0;
}

long long RankRule::at(long long n) const {
    const auto r = evaluate(n);
    if (r < 1 || r > n) {
        throw RankRuleError("rule " + to_string() + " gives " + std::to_string(r) + " at n=" +
                            std::to_string(n) + ", outside {1..n}");
    }
    return r;
}

std::string RankRule::to_string() const {
    switch (kind) {
    case Kind::sqrt: return "sqrt";
    case Kind::n23: return "n23";
    case Kind::log: return "log";
    case Kind::frac: return "frac:" + format_shortest(value);
    case Kind::constant: return "const:" + std::to_string(static_cast<long long>(value));
    }
    return {};
}

const char* case_name(CaseId id) noexcept {
    switch (id) {
    case CaseId::I: return "I";
    case CaseId::II: return "II";
    case CaseId::III: return "III";
    case CaseId::IV: return "IV";
    case CaseId::V: return "V";
    }
    return "?";
}

LimitCase LimitCase::defaults(CaseId id) {
    const RankRule sqrt_rule{RankRule::Kind::sqrt, 0.0};
    const RankRule log_rule{RankRule::Kind::log, 0.0};
    switch (id) {
    case CaseId::I:
    case CaseId::II: return {id, sqrt_rule, RankRule::constant(2), 0.0};
    case CaseId::III: return {id, RankRule::fraction(0.5), RankRule::constant(2), 0.5};
    case CaseId::IV: return {id, RankRule::fraction(0.5), log_rule, 0.5};
    case CaseId::V: return {id, {RankRule::Kind::n23, 0.0}, log_rule, 0.0};
    }
    return {};
}

LimitCase LimitCase::parse(std::string_view text) {
    const auto parts = split(text, ';');
    if (parts.empty()) throw ParseError("empty case specification");

    std::string_view id_text;
    std::string_view k_text;
    std::string_view j_text;
    std::string_view lambda_text;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto part = parts[i];
        if (part.empty()) continue;
        const auto eq = part.find('=');
        if (eq == std::string_view::npos) {
            if (i != 0) throw ParseError("expected key=value in case specification, got '" + std::string(part) + "'");
            id_text = part;
            continue;
        }
        const auto key = trim(part.substr(0, eq));
        const auto value = trim(part.substr(eq + 1));
        if (key == "case") id_text = value;
        else if (key == "k") k_text = value;
        else if (key == "j") j_text = value;
        else if (key == "lambda") lambda_text = value;
        else throw ParseError("unknown case key '" + std::string(key) + "'");
    }

    CaseId id;
    if (id_text == "I") id = CaseId::I;
    else if (id_text == "II") id = CaseId::II;
    else if (id_text == "III") id = CaseId::III;
    else if (id_text == "IV") id = CaseId::IV;
    else if (id_text == "V") id = CaseId::V;
    else throw ParseError("case must be one of I, II, III, IV, V; got '" + std::string(id_text) + "'");

    auto result = defaults(id);
    if (!k_text.empty()) result.k_rule = RankRule::parse(k_text);
    if (!j_text.empty()) result.j_rule = RankRule::parse(j_text);

    if (result.u_is_central()) {
        if (!lambda_text.empty()) {
            const double lambda = parse_double(lambda_text, "lambda");
            if (!(lambda > 0.0 && lambda < 1.0)) throw ParseError("lambda must lie in (0,1)");
            result.lambda = lambda;
            if (k_text.empty()) result.k_rule = RankRule::fraction(lambda);
        } else if (result.k_rule.kind == RankRule::Kind::frac) {
            result.lambda = result.k_rule.value;
        }
    } else if (!lambda_text.empty()) {
        throw ParseError(std::string("lambda is not used by case ") + case_name(id));
    }

    if (result.v_is_extreme() && result.j_rule.kind != RankRule::Kind::constant) {
        throw ParseError(std::string("case ") + case_name(id) + " needs a fixed j (const:<j>)");
    }
    return result;
}

std::string LimitCase::to_string() const {
    std::string s = std::string("case=") + case_name(id) + "; k=" + k_rule.to_string() + "; j=" + j_rule.to_string();
    if (u_is_central()) s += "; lambda=" + format_shortest(lambda);
    return s;
}

double CaseRanks::k_over_n() const noexcept {
    return static_cast<double>(k) / static_cast<double>(n);
}

double CaseRanks::j_over_sqrt_k() const noexcept {
    return static_cast<double>(j) / std::sqrt(static_cast<double>(k));
}

CaseRanks resolve_ranks(const LimitCase& c, long long n) {
    if (n < 1) throw RankRuleError("sample size must be >= 1");
    const auto k = c.k_rule.at(n);
    const auto j = c.j_rule.at(n);
    const bool upper_u = c.id == CaseId::I || c.id == CaseId::V;
    return {n, k, j, upper_u ? n - k + 1 : k, n - j + 1};
}

ScalingMap scaling_for(const LimitCase& c, long long n) {
    const auto ranks = resolve_ranks(c, n);
    const double dn = static_cast<double>(n);
    const double dk = static_cast<double>(ranks.k);
    const double dj = static_cast<double>(ranks.j);

    AffineMap u{};
    switch (c.id) {
    case CaseId::I:
    case CaseId::V: u = {dn / std::sqrt(dk), (dn - dk + 1.0) / (dn + 1.0)}; break;
    case CaseId::II: u = {dn / std::sqrt(dk), dk / (dn + 1.0)}; break;
    case CaseId::III:
    case CaseId::IV: u = {std::sqrt(dn), dk / (dn + 1.0)}; break;
    }
    const AffineMap v = c.v_is_extreme() ? AffineMap{dn, 1.0}
                                         : AffineMap{dn / std::sqrt(dj), (dn - dj + 1.0) / (dn + 1.0)};
    return {u, v};
}

ScaledPair scaling_map(const LimitCase& c, long long n, double u, double v) {
    return scaling_for(c, n).apply(u, v);
}

double LimitLaw::u_cdf(double x) const {
    return std_normal_cdf(x / u_sd);
}

double LimitLaw::v_cdf(double y) const {
    return gj_index > 0 ? gj_cdf(gj_index, y) : std_normal_cdf(y);
}

LimitLaw limit_law(const LimitCase& c) {
    const double sd = c.u_is_central() ? std::sqrt(c.lambda * (1.0 - c.lambda)) : 1.0;
    if (!c.v_is_extreme()) return {sd, 0};
    if (c.j_rule.kind != RankRule::Kind::constant) {
        throw DomainError(std::string("case ") + case_name(c.id) + " needs a fixed j for its G_j limit");
    }
    return {sd, static_cast<int>(c.j_rule.value)};
}

double limit_joint_cdf(const LimitCase& c, double x, double y) {
    return limit_law(c).joint_cdf(x, y);
}

double univariate_bound(long long n, long long r, long long k) {
    if (!(1 <= r && k >= 1 && r <= n - k + 1 && n - k + 1 <= n)) {
        throw DomainError("univariate_bound: need 1 <= r <= n-k+1 <= n, got n=" + std::to_string(n) +
                          " r=" + std::to_string(r) + " k=" + std::to_string(k));
    }
    const long long gap = n - r - k + 1;
    if (gap == 0) return std::numeric_limits<double>::infinity();
    const double num = static_cast<double>(r) * static_cast<double>(k);
    const double den = static_cast<double>(n) * static_cast<double>(gap);
    return std::sqrt(num / den);
}

} // namespace bivos
