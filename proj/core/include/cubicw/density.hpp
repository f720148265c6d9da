#pragma once

#include <stdexcept>
#include <vector>

#include "cubicw/quadrature.hpp"

namespace cubicw {

/// Drift family g_k(x) = a1 x^(2k-1) + a2 x^(2k+1), k >= 1.
struct GSpec {
    int k = 1;
    double a1 = 0.0;
    double a2 = 0.0;

    double g(double x) const;
    /// Integral of g from 0 to y.
    double G(double y) const;
};

struct IntegrabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Continuous target law with density p(y) = c exp(-G(y)) for a polynomial
/// exponent G. Normalization, CDF and tails come from adaptive quadrature on
/// a truncation window chosen so the discarded tails are below 1e-16; the
/// window is re-checked by doubling. Immutable after construction; queries
/// are safe to issue concurrently.
class LimitDensity {
  public:
    /// G(y) = quadratic_coeff y^2/2 + integral of gspec; the spec'd family.
    static LimitDensity from_g(double quadratic_coeff, const GSpec& gspec, double quad_tol = 1e-10);
    /// G(y) = sum_i coeffs[i] y^i (general escape hatch; coeffs[0] ignored).
    static LimitDensity from_poly(const std::vector<double>& G_coeffs, double quad_tol = 1e-10);
    /// Standard normal.
    static LimitDensity gaussian(double quad_tol = 1e-10);
    /// p ~ exp(-J^3 y^4 / 12), the critical quartic for J = 1.
    static LimitDensity quartic(double J, double quad_tol = 1e-10);
    /// p ~ exp(-(-alpha) y^2/2 - J^3 y^4/12), alpha <= 0.
    static LimitDensity mixed(double alpha, double J, double quad_tol = 1e-10);

    double G(double y) const;
    /// dG/dy, the drift appearing in non-uniform bound prefactors.
    double g_of(double y) const;
    double log_c() const { return log_c_; }
    double c() const;
    double pdf(double y) const;
    double cdf(double z) const;
    double tail(double x) const;      // P(Y > x)
    double log_tail(double x) const;  // stable for deep right tails
    double truncation_radius() const { return L_; }
    double quadrature_tolerance() const { return tol_; }
    const std::vector<double>& exponent_coeffs() const { return G_; }

  private:
    explicit LimitDensity(std::vector<double> G_coeffs, double quad_tol);
    void normalize_and_tabulate();

    std::vector<double> G_;
    double tol_ = 1e-10;
    double log_c_ = 0.0;
    double L_ = 0.0;
    double shift_ = 0.0;               // grid minimum of G, keeps exp in [0, 1]
    std::vector<QuadPanel> panels_;    // density panels over [-L, L]
    std::vector<double> panel_cum_;    // integral of p from -L to panel end
};

double normal_cdf(double z);
double normal_tail(double x);
double normal_log_tail(double x);

}  // namespace cubicw
