#pragma once

#include <cstddef>
#include <functional>

namespace bivos {

struct SimpsonOptions {
    double abs_tol = 1e-9;
    std::size_t max_subdivisions = 20000;
    /// Evaluate the integrand one ulp inside each endpoint instead of at it.
    bool open_endpoints = true;
};

struct QuadratureResult {
    double value;
    double error_estimate;
    std::size_t subdivisions;
};

/// Adaptive Simpson with Richardson correction. Throws QuadratureError
/// (carrying the achieved error estimate) when the subdivision cap is hit.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  const SimpsonOptions& options = {});

} // namespace bivos
