#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cubicw/model.hpp"

namespace cubicw {

enum class PointKind { GlobalMin, LocalMin, LocalMax, Saddle };
const char* to_string(PointKind k);

struct EquilibriumPoint {
    double m = 0.0;
    double phi_value = 0.0;
    double phi_dd = 0.0;
    PointKind kind = PointKind::Saddle;
};

/// Paramagnetic: unique minimizer m0 = 0 (J below the coexistence curve).
/// PolarizedLow: positive phase m1 with gamma(K) < J < 1.
/// PolarizedHigh: positive phase m2 with J >= 1.
/// Coexistence: two equal-depth global minimizers.
/// Critical: (K, J) = (0, 1), flat quartic bottom at m = 0.
enum class PhaseLabel { Paramagnetic, PolarizedLow, PolarizedHigh, Coexistence, Critical };
const char* to_string(PhaseLabel label);

struct PhasePortrait {
    Couplings params;
    std::vector<EquilibriumPoint> stationary_points;  // sorted by m
    std::vector<EquilibriumPoint> global_minimizers;  // 1 or 2 entries
    PhaseLabel phase_label = PhaseLabel::Paramagnetic;
    double inf_phi = 0.0;  // infimum of phi over [-1, 1]
};

struct RootScanOptions {
    long grid_points = 100000;    // dense sign scan on (-1+eps, 1-eps)
    double bisect_tol = 1e-12;    // root refinement tolerance in m
    double dedup_tol = 1e-9;      // roots closer than this are merged
    double depth_tol = 1e-10;     // equal-depth detection for global minima
    double curvature_tol = 1e-9;  // |phi''| below this counts as degenerate
};

/// All roots of the mean-field residual in (-1, 1), classified by phi''.
/// m = 0 is always a root and is always included.
std::vector<EquilibriumPoint> find_stationary_points(Couplings c, const RootScanOptions& opt = {});

PhasePortrait analyze_phase(Couplings c, const RootScanOptions& opt = {});

struct CoexistenceError : std::runtime_error {
    EquilibriumPoint low;
    EquilibriumPoint high;
    CoexistenceError(const EquilibriumPoint& lo, const EquilibriumPoint& hi);
};

struct CriticalPointError : std::runtime_error {
    CriticalPointError();
};

struct Phase {
    double m = 0.0;
    PhaseLabel label = PhaseLabel::Paramagnetic;
};

/// The unique pure phase. Throws CoexistenceError when two equal-depth
/// minima are detected and CriticalPointError at (0, 1).
Phase m_star(Couplings c, const RootScanOptions& opt = {});

struct GammaCurvePoint {
    double K = 0.0;
    double J_gamma = 0.0;
    double m_low = 0.0;
    double m_high = 0.0;
    double equal_depth_gap = 0.0;
};

struct NoCoexistenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when the J bracket does not straddle the coexistence curve or the
/// depth difference fails its monotonicity check on the bracket grid.
struct BracketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GammaOptions {
    double j_lo = 0.0;
    double j_hi = 1.0 - 1e-9;
    double depth_tol = 1e-10;
    double j_tol = 1e-12;
    int bracket_grid = 17;  // monotonicity check resolution
    RootScanOptions scan{};
};

/// Equal-depth point J = gamma(K): phi(0) = phi(m_high) with both global.
GammaCurvePoint gamma_of_K(double K, const GammaOptions& opt = {});

/// Large-deviation rate function phi(m) - inf phi; nonnegative, zero exactly
/// on the equilibrium set.
double rate_function(double m, const PhasePortrait& portrait);
double rate_function(double m, Couplings c);

struct AsymptoticsRow {
    double K = 0.0;
    double m_star = 0.0;
    double predicted = 0.0;
    double ratio = 0.0;  // NaN when predicted == 0
};

/// Pure phase along J = 1 + alpha K against its small-K asymptote
/// (sqrt(3 alpha K) for alpha > 0, 3K for alpha = 0, 0 for alpha < 0).
std::vector<AsymptoticsRow> m_star_asymptotics(double alpha, const std::vector<double>& K_grid);

}  // namespace cubicw
