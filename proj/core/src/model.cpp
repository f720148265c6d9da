#include "cubicw/model.hpp"

#include <cmath>
#include <string>

namespace cubicw {

void validate(const ModelParams& p) {
    if (p.n < 1) throw std::invalid_argument("ModelParams: n must be >= 1, got " + std::to_string(p.n));
    if (p.K < 0.0) throw std::invalid_argument("ModelParams: K must be >= 0, got " + std::to_string(p.K));
    if (!std::isfinite(p.K) || !std::isfinite(p.J)) throw std::invalid_argument("ModelParams: K, J must be finite");
}

double binary_entropy(double m) {
    if (!(std::fabs(m) <= 1.0)) throw std::domain_error("binary_entropy: |m| <= 1 required");
    if (m == 1.0 || m == -1.0) return 0.0;
    const double a = (1.0 - m) / 2.0;
    const double b = (1.0 + m) / 2.0;
    return a * std::log(a) + b * std::log(b);
}

double phi(double m, Couplings c) {
    return binary_entropy(m) - c.K / 3.0 * m * m * m - c.J / 2.0 * m * m;
}

namespace {
void require_open_interval(double m, const char* who) {
    if (!(std::fabs(m) < 1.0)) throw std::domain_error(std::string(who) + ": |m| < 1 required");
}
}  // namespace

double phi_d1(double m, Couplings c) {
    require_open_interval(m, "phi_d1");
    // atanh(m) = (1/2) log((1+m)/(1-m)), correctly rounded near zero
    return std::atanh(m) - c.K * m * m - c.J * m;
}

double phi_d2(double m, Couplings c) {
    require_open_interval(m, "phi_d2");
    return 1.0 / (1.0 - m * m) - 2.0 * c.K * m - c.J;
}

double phi_d3(double m, Couplings c) {
    require_open_interval(m, "phi_d3");
    const double q = 1.0 - m * m;
    return 2.0 * m / (q * q) - 2.0 * c.K;
}

double mean_field_residual(double m, Couplings c) {
    if (!(std::fabs(m) <= 1.0)) throw std::domain_error("mean_field_residual: |m| <= 1 required");
    return std::tanh(c.K * m * m + c.J * m) - m;
}

TaylorCoeffs taylor_coeffs(double m, Couplings c) {
    const double u = c.J * m + c.K * m * m;
    const double t = std::tanh(u);
    const double d = c.J + 2.0 * c.K * m;
    TaylorCoeffs out;
    out.c0 = t;
    out.c1 = d * tanh_d1(t);
    out.c2 = 2.0 * c.K * tanh_d1(t) + d * d * tanh_d2(t);
    out.c3 = 6.0 * c.K * d * tanh_d2(t) + d * d * d * tanh_d3(t);
    return out;
}

}  // namespace cubicw
