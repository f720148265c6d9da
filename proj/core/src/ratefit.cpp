#include "cubicw/ratefit.hpp"

#include <cmath>
#include <stdexcept>

namespace cubicw {

RateFit fit_power_law(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 2) throw std::invalid_argument("fit_power_law: need at least two points");
    const double n = static_cast<double>(pairs.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& [x, y] : pairs) {
        if (!(x > 0.0) || !(y > 0.0)) throw std::invalid_argument("fit_power_law: coordinates must be positive");
        sx += std::log(x);
        sy += std::log(y);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [x, y] : pairs) {
        const double dx = std::log(x) - mx;
        const double dy = std::log(y) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_power_law: abscissae are all equal");
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    const double ss_res = syy - fit.slope * sxy;
    fit.r_squared = syy > 0.0 ? std::max(0.0, std::min(1.0, 1.0 - ss_res / syy)) : 1.0;
    fit.pairs = pairs;
    return fit;
}

}  // namespace cubicw
