#include "cubicw/law.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cubicw {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Neumaier-compensated running sum.
struct KahanSum {
    double s = 0.0;
    double c = 0.0;
    void add(double x) {
        const double t = s + x;
        if (std::fabs(s) >= std::fabs(x)) {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }
    double value() const { return s + c; }
};

void normalize(MagnetizationLaw& law) {
    double mx = kNegInf;
    for (double x : law.log_weights) mx = std::max(mx, x);
    KahanSum acc;
    for (double x : law.log_weights) {
        if (x != kNegInf) acc.add(std::exp(x - mx));
    }
    law.log_z_hi = mx;
    law.log_z_lo = std::log(acc.value());
    law.log_Z = law.log_z_hi + law.log_z_lo;

    law.cdf_prefix.resize(law.log_weights.size());
    KahanSum cum;
    for (std::size_t j = 0; j < law.log_weights.size(); ++j) {
        cum.add(law.pmf(static_cast<long>(j)));
        law.cdf_prefix[j] = std::min(cum.value(), 1.0);
    }
    law.cdf_prefix.back() = 1.0;  // the full support carries all the mass
}

}  // namespace

double log_sum_exp(const std::vector<double>& v) {
    double mx = kNegInf;
    for (double x : v) mx = std::max(mx, x);
    if (mx == kNegInf) return kNegInf;
    KahanSum acc;
    for (double x : v) {
        if (x != kNegInf) acc.add(std::exp(x - mx));
    }
    return mx + std::log(acc.value());
}

double MagnetizationLaw::pmf(long j) const {
    const double lp = log_pmf(j);
    return lp == kNegInf ? 0.0 : std::exp(lp);
}

double MagnetizationLaw::cdf_s(double s) const {
    if (s < s_of(0)) return 0.0;
    const long j = std::min<long>(static_cast<long>(std::floor((s + params.n) / 2.0)), params.n);
    return cdf_prefix[j];
}

double MagnetizationLaw::max_pmf() const {
    double mx = 0.0;
    for (long j = 0; j <= params.n; ++j) mx = std::max(mx, pmf(j));
    return mx;
}

MagnetizationLaw build_law(const ModelParams& p) {
    validate(p);
    MagnetizationLaw law;
    law.params = p;
    const long n = p.n;
    law.log_weights.resize(n + 1);
    const double lgn = std::lgamma(static_cast<double>(n) + 1.0);
    for (long j = 0; j <= n; ++j) {
        const double m = law.m_of(j);
        // the symmetric grouping keeps the K = 0 law bitwise symmetric
        const double log_binom = lgn - (std::lgamma(static_cast<double>(j) + 1.0) +
                                        std::lgamma(static_cast<double>(n - j) + 1.0));
        law.log_weights[j] = log_binom + n * (p.K / 3.0 * m * m * m + p.J / 2.0 * m * m);
    }
    normalize(law);
    return law;
}

Rescaling phase_rescaling(const ModelParams& p, double m_star) {
    const double pdd = phi_d2(m_star, p.couplings());
    if (!(pdd > 0.0)) throw std::domain_error("phase_rescaling: phi''(m*) must be positive");
    return {static_cast<double>(p.n) * m_star, std::sqrt(static_cast<double>(p.n) / pdd)};
}

Rescaling power_rescaling(long n, double exponent) {
    return {0.0, std::pow(static_cast<double>(n), exponent)};
}

Rescaling variance_rescaling(long n, double J) {
    if (!(J < 1.0)) throw std::domain_error("variance_rescaling: J < 1 required");
    return {0.0, std::sqrt(static_cast<double>(n) / (1.0 - J))};
}

double cdf_rescaled(const MagnetizationLaw& law, const Rescaling& rv, double z) {
    // W <= z  <=>  S_n <= center + scale z  (scale > 0)
    return law.cdf_s(rv.center + rv.scale * z);
}

double log_tail_above(const MagnetizationLaw& law, const Rescaling& rv, double x) {
    const double s_min = rv.center + rv.scale * x;
    std::vector<double> terms;
    for (long j = law.size() - 1; j >= 0; --j) {
        if (law.s_of(j) <= s_min) break;
        if (law.log_weights[j] != kNegInf) terms.push_back(law.log_pmf(j));
    }
    return log_sum_exp(terms);
}

double kolmogorov_to_cdf(const MagnetizationLaw& law, const Rescaling& rv,
                         const std::function<double(double)>& target_cdf) {
    double sup = 0.0;
    double left = 0.0;
    for (long j = 0; j < law.size(); ++j) {
        const double t = target_cdf(rv.w_of(law.s_of(j)));
        sup = std::max(sup, std::fabs(law.cdf_prefix[j] - t));
        sup = std::max(sup, std::fabs(left - t));
        left = law.cdf_prefix[j];
    }
    return sup;
}

double kolmogorov_between(const MagnetizationLaw& a, const Rescaling& ra,
                          const MagnetizationLaw& b, const Rescaling& rb) {
    // Step functions are constant between merged atoms; the sup is attained
    // at the right-continuous values.
    long ia = 0, ib = 0;
    double sup = 0.0;
    double Fa = 0.0, Fb = 0.0;
    while (ia < a.size() || ib < b.size()) {
        const double wa = ia < a.size() ? ra.w_of(a.s_of(ia)) : std::numeric_limits<double>::infinity();
        const double wb = ib < b.size() ? rb.w_of(b.s_of(ib)) : std::numeric_limits<double>::infinity();
        if (wa <= wb) {
            Fa = a.cdf_prefix[ia];
            ++ia;
        }
        if (wb <= wa) {
            Fb = b.cdf_prefix[ib];
            ++ib;
        }
        sup = std::max(sup, std::fabs(Fa - Fb));
    }
    return sup;
}

MagnetizationLaw conditional_law(const MagnetizationLaw& law, const Interval& m_window) {
    MagnetizationLaw out;
    out.params = law.params;
    out.log_weights.resize(law.log_weights.size());
    bool any = false;
    for (long j = 0; j < law.size(); ++j) {
        if (m_window.contains(law.m_of(j)) && law.log_weights[j] != kNegInf) {
            out.log_weights[j] = law.log_weights[j];
            any = true;
        } else {
            out.log_weights[j] = kNegInf;
        }
    }
    if (!any) throw EmptyConditionError("conditional_law: window does not intersect the support");
    normalize(out);
    return out;
}

double moment(const MagnetizationLaw& law, const Rescaling& rv, int order) {
    KahanSum acc;
    for (long j = 0; j < law.size(); ++j) {
        const double p = law.pmf(j);
        if (p == 0.0) continue;
        acc.add(p * std::pow(rv.w_of(law.s_of(j)), order));
    }
    return acc.value();
}

double abs_moment(const MagnetizationLaw& law, const Rescaling& rv, int order) {
    KahanSum acc;
    for (long j = 0; j < law.size(); ++j) {
        const double p = law.pmf(j);
        if (p == 0.0) continue;
        acc.add(p * std::pow(std::fabs(rv.w_of(law.s_of(j))), order));
    }
    return acc.value();
}

std::vector<double> moments(const MagnetizationLaw& law, const Rescaling& rv, const std::vector<int>& orders) {
    std::vector<double> out;
    out.reserve(orders.size());
    for (int k : orders) out.push_back(moment(law, rv, k));
    return out;
}

double mean_magnetization(const MagnetizationLaw& law) {
    KahanSum acc;
    for (long j = 0; j < law.size(); ++j) acc.add(law.pmf(j) * law.m_of(j));
    return acc.value();
}

}  // namespace cubicw
