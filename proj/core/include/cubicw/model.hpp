#pragma once

#include <stdexcept>

namespace cubicw {

/// Interaction strengths of the mean-field model: K couples spin triples,
/// J couples spin pairs. K >= 0 is canonical (spin flip absorbs the sign),
/// K = 0 reduces to the classical quadratic model.
struct Couplings {
    double K = 0.0;
    double J = 0.0;
};

/// Finite system: couplings plus the number of spins.
struct ModelParams {
    double K = 0.0;
    double J = 0.0;
    long n = 1;

    Couplings couplings() const { return {K, J}; }
};

/// Throws std::invalid_argument on n < 1 or K < 0.
void validate(const ModelParams& p);

/// Clamp used when searching on the open interval (-1, 1); the entropy
/// derivative diverges logarithmically at the endpoints.
inline constexpr double kDomainEps = 1e-9;

/// Binary relative entropy
///   I(m) = (1-m)/2 log((1-m)/2) + (1+m)/2 log((1+m)/2),
/// with 0 log 0 = 0 at m = +-1. Domain |m| <= 1.
double binary_entropy(double m);

/// Potential phi(m) = I(m) - (K/3) m^3 - (J/2) m^2 on [-1, 1].
double phi(double m, Couplings c);

/// phi'(m)  = atanh(m) - K m^2 - J m           (|m| < 1)
/// phi''(m) = 1/(1-m^2) - 2 K m - J            (|m| < 1)
/// phi'''(m)= 2m/(1-m^2)^2 - 2 K               (|m| < 1)
double phi_d1(double m, Couplings c);
double phi_d2(double m, Couplings c);
double phi_d3(double m, Couplings c);

/// tanh(K m^2 + J m) - m; zero exactly at the stationary points of phi.
double mean_field_residual(double m, Couplings c);

/// Derivatives of tanh expressed through t = tanh(u); algebraic forms are
/// stable where numeric differencing saturates.
inline double tanh_d1(double t) { return 1.0 - t * t; }
inline double tanh_d2(double t) { return -2.0 * t * (1.0 - t * t); }
inline double tanh_d3(double t) { return -2.0 * (1.0 - t * t) * (1.0 - 3.0 * t * t); }

/// Taylor coefficients of x -> tanh(J(m+x) + K(m+x)^2) at x = 0, orders 0..3.
struct TaylorCoeffs {
    double c0;
    double c1;
    double c2;
    double c3;
};
TaylorCoeffs taylor_coeffs(double m, Couplings c);

}  // namespace cubicw
