#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cubicw/density.hpp"
#include "cubicw/law.hpp"
#include "cubicw/phase.hpp"
#include "cubicw/ratefit.hpp"

namespace cubicw {

/// Conditional mean of a resampled spin given S_n = s. Every up spin sees the
/// leave-one-out magnetization (s-1)/n, every down spin (s+1)/n; both carry
/// the K/(3n^2) self term of the cubic interaction.
struct FlipMeans {
    double t_plus = 0.0;
    double t_minus = 0.0;
};
FlipMeans conditional_flip_mean(double s, const ModelParams& p);

/// The three closed forms of the regression slope n*lambda at a phase m:
/// 1 - (J + 2Km)(1 - m^2), (1 - m^2) phi''(m), and phi''/(phi'' + J + 2Km).
struct LambdaForms {
    double from_c1 = 0.0;
    double from_phi = 0.0;
    double from_ratio = 0.0;
};
LambdaForms lambda_forms(const ModelParams& p, double m);
double lambda_linear(const ModelParams& p, double m);

/// E(W - W' | S_n = s) for one heat-bath step, exact at every support point.
double exact_regression(double s, const ModelParams& p, const Rescaling& rv);

/// E((W - W')^2 | S_n = s), exact.
double exact_delta2(double s, const ModelParams& p, const Rescaling& rv);

enum class RegressionMode { Linear, CubicFamily };

/// E(W-W'|W) = lambda * (W or g(W)) + R; the remainder at a support point is
/// defined as the exact regression minus the modeled part, so the
/// decomposition holds to machine precision by construction.
struct RegressionDecomposition {
    RegressionMode mode = RegressionMode::Linear;
    double lambda = 0.0;
    GSpec g{};

    double modeled(double w) const;
    double remainder(double s, const ModelParams& p, const Rescaling& rv) const;

    static RegressionDecomposition linear_at_phase(const ModelParams& p, double m);
    static RegressionDecomposition linear(double lambda);
    static RegressionDecomposition cubic(double lambda, const GSpec& g);
};

struct RegressionPoint {
    double w = 0.0;
    double value = 0.0;
};

struct NonUniformRow {
    double z = 0.0;
    double abs_diff = 0.0;  // |F_n(z) - target(z)| at the worse one-sided limit
    double weighted = 0.0;  // abs_diff * (1 + |z|) or (1 + |g(z)|)
};

/// Plug-in bound evaluation: d_K <= E|1 - E(D^2|W)/(2 lambda)| + E|R|/(c_k
/// lambda) + 3A for bounded exchangeable pairs. All expectations are finite
/// sums against the exact law; nothing is sampled.
struct SteinReport {
    ModelParams params;
    double m = 0.0;       // centering in magnetization units
    double lambda = 0.0;
    double A = 0.0;       // a.s. bound on |W - W'| = 2/scale
    double term_delta2 = 0.0;
    double term_R = 0.0;
    double term_A = 0.0;
    double be_bound = 0.0;
    double d_k = 0.0;     // exact Kolmogorov distance to the target
    double e_abs_w = 0.0;
    double e_w2 = 0.0;
    bool hypothesis_ok = false;  // E|W| <= 2 required by the plug-in theorems
    std::vector<RegressionPoint> regression_curve;
    std::vector<NonUniformRow> nonuniform;
};

/// c_k is the target density's normalization constant (1 for the normal).
/// g_for_prefactor defaults to the decomposition drift (identity in linear
/// mode). The non-uniform table is decimated to at most max_table_rows atoms.
SteinReport be_certificate(const MagnetizationLaw& law, const Rescaling& rv,
                           const RegressionDecomposition& decomp,
                           const std::function<double(double)>& target_cdf, double c_k = 1.0,
                           std::size_t max_table_rows = 1024);

/// Exact left side of the magnetization concentration inequality
///   P(|m - tanh(J m + K m^2)| >= (J+4K)/n + t/sqrt(n)) <= 2 exp(-t^2/(4(1+J+2K)))
/// against its closed-form right side. Requires J > 0, K >= 0.
struct ConcentrationRow {
    double t = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};
std::vector<ConcentrationRow> concentration_check(const MagnetizationLaw& law, const std::vector<double>& t_grid);

/// At (K, J) = (0, 1): exact P(n^(1/4) |m| >= t) and the fitted constant in
/// the 2 exp(-c t^4) envelope. Reported, never asserted.
struct CriticalConcentrationRow {
    double t = 0.0;
    double lhs = 0.0;
    double c_fit = 0.0;
};
std::vector<CriticalConcentrationRow> critical_concentration_fit(const MagnetizationLaw& law,
                                                                 const std::vector<double>& t_grid);

/// Exact tail ratio P(W > x) / P(Z > x) and the moderate-deviation residual
/// |ratio - 1| sqrt(n) / (1 + x^3).
struct CramerRow {
    double x = 0.0;
    double log_p_w = 0.0;
    double log_p_z = 0.0;
    double ratio = 0.0;
    double normalized_residual = 0.0;
};
std::vector<CramerRow> cramer_ratio(const MagnetizationLaw& law, const Rescaling& rv,
                                    const std::vector<double>& x_grid);

/// Unconditioned convenience: builds the law at the pure phase and throws
/// CoexistenceError on the coexistence curve unless a window is supplied.
std::vector<CramerRow> cramer_experiment(const ModelParams& p, const std::vector<double>& x_grid,
                                         const std::optional<Interval>& condition = std::nullopt);

struct MdpRow {
    double x = 0.0;
    double a_n = 0.0;
    double value = 0.0;  // log P(W > a_n x) / a_n^2
    double limit = 0.0;  // -x^2/2
};
std::vector<MdpRow> mdp_table(const MagnetizationLaw& law, const Rescaling& rv, double a_n,
                              const std::vector<double>& x_grid);

/// Magnitudes of the Taylor-form remainder pieces; diagnostic only, the
/// certificate path never rebuilds R from these.
struct RTermDiagnostics {
    double e_abs_r1 = 0.0;             // decays like n^(-3/2)
    double e_abs_r3_over_2lambda = 0.0;  // decays like 1/n
};
RTermDiagnostics r_term_diagnostics(const MagnetizationLaw& law, const Rescaling& rv, double m_phase);

/// Sup-norm estimates of the moderate-deviation hypothesis constants over the
/// truncated support |W| <= d sqrt(n).
struct CramerHypothesisConstants {
    double d = 0.0;
    double delta1 = 0.0;
    double delta2 = 0.0;
    double theta = 0.0;
};
CramerHypothesisConstants cramer_hypothesis_constants(const MagnetizationLaw& law, const Rescaling& rv,
                                                      const RegressionDecomposition& decomp, double d);

/// Critical-window scalings K_n -> 0 along J = 1 + alpha K_n, alpha < 0.
///   MixedAtRootN:        K_n = n^(-1/2),  W = S_n/n^(3/4), mixed target
///   FasterQuartic:       K_n = n^(-k),    W = S_n/n^(3/4), quartic target
///   SlowerNormalVariance:K_n = n^(-2d),   W = S_n/sigma,   normal target
///   SlowerNormalPower34: K_n = n^(-2d),   W = S_n/n^(3/4), normal target
enum class ThresholdCase { MixedAtRootN = 1, FasterQuartic = 2, SlowerNormalVariance = 3, SlowerNormalPower34 = 4 };

struct ThresholdRow {
    long n = 0;
    double K_n = 0.0;
    double J_n = 0.0;
    double d_k = 0.0;
    bool included = false;  // false when the phase is not zero at this n
};

struct ThresholdResult {
    ThresholdCase which{};
    double alpha = 0.0;
    double delta = 0.0;
    double k_exponent = 0.0;
    std::vector<ThresholdRow> rows;
    RateFit fit;  // over included rows
    std::vector<NonUniformRow> nonuniform_largest;
};

ThresholdResult threshold_experiment(ThresholdCase which, double alpha, const std::vector<long>& n_grid,
                                     double delta = 0.1, double k_exponent = 0.75, int workers = 0);

/// Exploratory alpha = 0 scaling K_n = n^(-1/4): the drift 3x + x^3/3 - x^2
/// falls outside the certified family, so only exact distances to candidate
/// targets are tabulated. Non-certified by construction.
struct Alpha0Row {
    long n = 0;
    double K_n = 0.0;
    double m_n = 0.0;
    double d_k_candidate = 0.0;  // density ~ exp(-(3/2)y^2 + y^3/3 - y^4/12)
    double d_k_quartic = 0.0;
    double d_k_normal = 0.0;
};
std::vector<Alpha0Row> alpha0_exploration(const std::vector<long>& n_grid, int workers = 0);

}  // namespace cubicw
