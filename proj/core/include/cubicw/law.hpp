#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "cubicw/model.hpp"

namespace cubicw {

/// Exact law of the total magnetization S_n on {-n, -n+2, ..., n}, kept in
/// log domain. Index j = 0..n maps to s = 2j - n; the unnormalized weight is
/// log C(n, j) + n ((K/3) m^3 + (J/2) m^2) with m = s/n. Immutable once built.
struct MagnetizationLaw {
    ModelParams params;
    std::vector<double> log_weights;  // -inf marks atoms removed by conditioning
    double log_Z = 0.0;               // log_z_hi + log_z_lo, for reporting
    // The normalizer is kept split: log_z_hi is the max weight (an exactly
    // stored double), log_z_lo the small log of the shifted sum. Routing the
    // pmf through the recombined log_Z would cap its accuracy at the ulp of
    // a number of size n log 2.
    double log_z_hi = 0.0;
    double log_z_lo = 0.0;
    std::vector<double> cdf_prefix;   // P(S_n <= 2j - n)

    long n() const { return params.n; }
    long size() const { return params.n + 1; }
    double s_of(long j) const { return 2.0 * j - static_cast<double>(params.n); }
    double m_of(long j) const { return s_of(j) / static_cast<double>(params.n); }
    double log_pmf(long j) const { return (log_weights[j] - log_z_hi) - log_z_lo; }
    double pmf(long j) const;
    double cdf_s(double s) const;  // right-continuous P(S_n <= s)
    double max_pmf() const;
};

MagnetizationLaw build_law(const ModelParams& p);

/// Affine change of variable w = (s - center) / scale, scale > 0.
struct Rescaling {
    double center = 0.0;
    double scale = 1.0;

    double w_of(double s) const { return (s - center) / scale; }
    /// Almost-sure bound on |W - W'| under a single spin flip.
    double step_bound() const { return 2.0 / scale; }
};

/// center = n m*, scale = sqrt(n / phi''(m*)); the CLT normalization.
Rescaling phase_rescaling(const ModelParams& p, double m_star);
/// center = 0, scale = n^exponent.
Rescaling power_rescaling(long n, double exponent);
/// center = 0, scale = sqrt(n / (1 - J)); requires J < 1.
Rescaling variance_rescaling(long n, double J);

double cdf_rescaled(const MagnetizationLaw& law, const Rescaling& rv, double z);

/// log P(W > x) by log-sum-exp over the atoms above x; -inf when empty.
double log_tail_above(const MagnetizationLaw& law, const Rescaling& rv, double x);

/// sup_z |F_n(z) - target(z)| against a monotone continuous CDF; the sup is
/// attained at atoms, evaluated with both one-sided limits.
double kolmogorov_to_cdf(const MagnetizationLaw& law, const Rescaling& rv,
                         const std::function<double(double)>& target_cdf);

/// Kolmogorov distance between two discrete laws (merged-atom evaluation).
double kolmogorov_between(const MagnetizationLaw& a, const Rescaling& ra,
                          const MagnetizationLaw& b, const Rescaling& rb);

struct Interval {
    double lo = -1.0;
    double hi = 1.0;
    bool include_lo = true;
    bool include_hi = true;

    bool contains(double x) const {
        if (x < lo || x > hi) return false;
        if (x == lo && !include_lo) return false;
        if (x == hi && !include_hi) return false;
        return true;
    }
};

struct EmptyConditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Law of S_n given m_n in the window; renormalized restriction of the pmf.
MagnetizationLaw conditional_law(const MagnetizationLaw& law, const Interval& m_window);

double moment(const MagnetizationLaw& law, const Rescaling& rv, int order);
double abs_moment(const MagnetizationLaw& law, const Rescaling& rv, int order);
std::vector<double> moments(const MagnetizationLaw& law, const Rescaling& rv, const std::vector<int>& orders);

/// E m_n under the law.
double mean_magnetization(const MagnetizationLaw& law);

/// Max-shifted log(sum exp(v_i)); ignores -inf entries.
double log_sum_exp(const std::vector<double>& v);

}  // namespace cubicw
