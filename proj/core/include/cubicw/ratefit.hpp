#pragma once

#include <utility>
#include <vector>

namespace cubicw {

/// Least-squares power-law fit value = C x^slope, computed on (log x, log y).
struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;  // log C
    double r_squared = 1.0;
    std::vector<std::pair<double, double>> pairs;
};

/// Requires at least two points with positive coordinates.
RateFit fit_power_law(const std::vector<std::pair<double, double>>& pairs);

}  // namespace cubicw
