#include "bivos/quadrature.hpp"

#include "bivos/error.hpp"
#include "bivos/text.hpp"

#include <cmath>

namespace bivos {
namespace {

constexpr int kMinDepth = 4;
constexpr int kMaxDepth = 60;

struct Simpson {
    const std::function<double(double)>& f;
    const SimpsonOptions& options;
    std::size_t subdivisions = 0;
    double error = 0.0;
    bool capped = false;

    double integrate(double a, double fa, double m, double fm, double b, double fb, double whole,
                     double tol, int depth) {
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = f(lm);
        const double frm = f(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;

        const bool converged = depth >= kMinDepth && std::abs(delta) <= 15.0 * tol;
        if (converged || depth >= kMaxDepth || capped) {
            error += std::abs(delta) / 15.0;
            return left + right + delta / 15.0;
        }
        if (++subdivisions > options.max_subdivisions) {
            capped = true;
            error += std::abs(delta) / 15.0;
            return left + right + delta / 15.0;
        }
        return integrate(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1) +
               integrate(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1);
    }
};

} // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  const SimpsonOptions& options) {
    if (!(a <= b)) throw DomainError("adaptive_simpson: need a <= b");
    if (a == b) return {0.0, 0.0, 0};

    const double fa = f(options.open_endpoints ? std::nextafter(a, b) : a);
    const double fb = f(options.open_endpoints ? std::nextafter(b, a) : b);
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);

    Simpson s{f, options};
    const double value = s.integrate(a, fa, m, fm, b, fb, whole, options.abs_tol, 0);
    if (s.capped) {
        throw QuadratureError("adaptive_simpson: subdivision cap reached, error estimate " +
                                  format_double(s.error),
                              s.error);
    }
    return {value, s.error, s.subdivisions};
}

} // namespace bivos
