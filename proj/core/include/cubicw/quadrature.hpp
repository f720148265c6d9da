#pragma once

#include <functional>
#include <vector>

namespace cubicw {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

struct QuadPanel {
    double a = 0.0;
    double b = 0.0;
    double value = 0.0;
};

/// Adaptive Gauss-Kronrod (G7, K15) on [a, b]. Accepts a panel once the
/// Kronrod-Gauss discrepancy is below the local tolerance; panels, when
/// requested, come back sorted by abscissa for cumulative use.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol = 1e-12, double rel_tol = 1e-12,
                     std::vector<QuadPanel>* panels = nullptr);

/// Single non-adaptive K15 evaluation of [a, b]; used for partial panels.
double kronrod15(const std::function<double(double)>& f, double a, double b);

}  // namespace cubicw
