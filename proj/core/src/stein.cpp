#include "cubicw/stein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "cubicw/parallel.hpp"

namespace cubicw {

namespace {

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

long support_index(double s, long n) {
    const long j = std::lround((s + static_cast<double>(n)) / 2.0);
    if (j < 0 || j > n || std::fabs(2.0 * j - n - s) > 1e-9) {
        throw std::domain_error("support point s must lie in {-n, -n+2, ..., n}");
    }
    return j;
}

}  // namespace

FlipMeans conditional_flip_mean(double s, const ModelParams& p) {
    validate(p);
    if (p.n < 2) throw std::domain_error("conditional_flip_mean: n >= 2 required");
    support_index(s, p.n);
    const double n = static_cast<double>(p.n);
    const double self = p.K / (3.0 * n * n);
    const double m_up = (s - 1.0) / n;
    const double m_dn = (s + 1.0) / n;
    return {std::tanh(p.J * m_up + p.K * m_up * m_up + self),
            std::tanh(p.J * m_dn + p.K * m_dn * m_dn + self)};
}

LambdaForms lambda_forms(const ModelParams& p, double m) {
    const double n = static_cast<double>(p.n);
    const double q = 1.0 - m * m;
    const double d = p.J + 2.0 * p.K * m;
    const double pdd = phi_d2(m, p.couplings());
    LambdaForms out;
    out.from_c1 = (1.0 - d * q) / n;
    out.from_phi = q * pdd / n;
    out.from_ratio = pdd / (pdd + d) / n;
    return out;
}

double lambda_linear(const ModelParams& p, double m) { return lambda_forms(p, m).from_phi; }

double exact_regression(double s, const ModelParams& p, const Rescaling& rv) {
    const FlipMeans fm = conditional_flip_mean(s, p);
    const double n = static_cast<double>(p.n);
    const double frac_up = (n + s) / (2.0 * n);
    const double frac_dn = (n - s) / (2.0 * n);
    return (s / n - frac_up * fm.t_plus - frac_dn * fm.t_minus) / rv.scale;
}

double exact_delta2(double s, const ModelParams& p, const Rescaling& rv) {
    const FlipMeans fm = conditional_flip_mean(s, p);
    const double n = static_cast<double>(p.n);
    const double frac_up = (n + s) / (2.0 * n);
    const double frac_dn = (n - s) / (2.0 * n);
    return 2.0 * (1.0 - frac_up * fm.t_plus + frac_dn * fm.t_minus) / (rv.scale * rv.scale);
}

double RegressionDecomposition::modeled(double w) const {
    return mode == RegressionMode::Linear ? w : g.g(w);
}

double RegressionDecomposition::remainder(double s, const ModelParams& p, const Rescaling& rv) const {
    return exact_regression(s, p, rv) - lambda * modeled(rv.w_of(s));
}

RegressionDecomposition RegressionDecomposition::linear_at_phase(const ModelParams& p, double m) {
    RegressionDecomposition d;
    d.mode = RegressionMode::Linear;
    d.lambda = lambda_linear(p, m);
    return d;
}

RegressionDecomposition RegressionDecomposition::linear(double lambda) {
    RegressionDecomposition d;
    d.mode = RegressionMode::Linear;
    d.lambda = lambda;
    return d;
}

RegressionDecomposition RegressionDecomposition::cubic(double lambda, const GSpec& g) {
    RegressionDecomposition d;
    d.mode = RegressionMode::CubicFamily;
    d.lambda = lambda;
    d.g = g;
    return d;
}

SteinReport be_certificate(const MagnetizationLaw& law, const Rescaling& rv,
                           const RegressionDecomposition& decomp,
                           const std::function<double(double)>& target_cdf, double c_k,
                           std::size_t max_table_rows) {
    if (!(decomp.lambda > 0.0 && decomp.lambda < 1.0)) {
        throw std::domain_error("be_certificate: lambda in (0, 1) required");
    }
    SteinReport rep;
    rep.params = law.params;
    rep.m = rv.center / static_cast<double>(law.n());
    rep.lambda = decomp.lambda;
    rep.A = rv.step_bound();

    KahanSum s_delta2, s_r, s_absw, s_w2;
    for (long j = 0; j < law.size(); ++j) {
        const double p = law.pmf(j);
        if (p == 0.0) continue;
        const double s = law.s_of(j);
        const double w = rv.w_of(s);
        s_delta2.add(p * std::fabs(1.0 - exact_delta2(s, law.params, rv) / (2.0 * decomp.lambda)));
        s_r.add(p * std::fabs(decomp.remainder(s, law.params, rv)));
        s_absw.add(p * std::fabs(w));
        s_w2.add(p * w * w);
    }
    rep.term_delta2 = s_delta2.value();
    rep.term_R = s_r.value() / (c_k * decomp.lambda);
    rep.term_A = 3.0 * rep.A;
    rep.be_bound = rep.term_delta2 + rep.term_R + rep.term_A;
    rep.e_abs_w = s_absw.value();
    rep.e_w2 = s_w2.value();
    rep.hypothesis_ok = rep.e_abs_w <= 2.0;
    rep.d_k = kolmogorov_to_cdf(law, rv, target_cdf);

    const long stride = std::max<long>(1, law.size() / static_cast<long>(max_table_rows));
    double left = 0.0;
    for (long j = 0; j < law.size(); ++j) {
        const double s = law.s_of(j);
        const double w = rv.w_of(s);
        if (j % stride == 0 && law.pmf(j) > 0.0) {
            rep.regression_curve.push_back({w, exact_regression(s, law.params, rv)});
            const double t = target_cdf(w);
            const double diff = std::max(std::fabs(law.cdf_prefix[j] - t), std::fabs(left - t));
            rep.nonuniform.push_back({w, diff, diff * (1.0 + std::fabs(decomp.modeled(w)))});
        }
        left = law.cdf_prefix[j];
    }
    return rep;
}

std::vector<ConcentrationRow> concentration_check(const MagnetizationLaw& law, const std::vector<double>& t_grid) {
    const ModelParams& p = law.params;
    if (!(p.J > 0.0)) throw std::domain_error("concentration_check: J > 0 required");
    const double n = static_cast<double>(p.n);
    std::vector<double> dev(law.size());
    for (long j = 0; j < law.size(); ++j) {
        const double m = law.m_of(j);
        dev[j] = std::fabs(m - std::tanh(p.J * m + p.K * m * m));
    }
    std::vector<ConcentrationRow> rows;
    rows.reserve(t_grid.size());
    for (double t : t_grid) {
        if (t < 0.0) throw std::domain_error("concentration_check: t >= 0 required");
        const double thr = (p.J + 4.0 * p.K) / n + t / std::sqrt(n);
        KahanSum lhs;
        for (long j = 0; j < law.size(); ++j) {
            if (dev[j] >= thr) lhs.add(law.pmf(j));
        }
        const double rhs = 2.0 * std::exp(-t * t / (4.0 * (1.0 + p.J + 2.0 * p.K)));
        rows.push_back({t, lhs.value(), rhs, lhs.value() <= rhs});
    }
    return rows;
}

std::vector<CriticalConcentrationRow> critical_concentration_fit(const MagnetizationLaw& law,
                                                                 const std::vector<double>& t_grid) {
    const double n = static_cast<double>(law.params.n);
    const double n14 = std::pow(n, 0.25);
    std::vector<CriticalConcentrationRow> rows;
    rows.reserve(t_grid.size());
    for (double t : t_grid) {
        KahanSum lhs;
        for (long j = 0; j < law.size(); ++j) {
            if (n14 * std::fabs(law.m_of(j)) >= t) lhs.add(law.pmf(j));
        }
        const double l = lhs.value();
        const double c = (t > 0.0 && l > 0.0) ? -std::log(l / 2.0) / (t * t * t * t)
                                              : std::numeric_limits<double>::quiet_NaN();
        rows.push_back({t, l, c});
    }
    return rows;
}

std::vector<CramerRow> cramer_ratio(const MagnetizationLaw& law, const Rescaling& rv,
                                    const std::vector<double>& x_grid) {
    const double sqrt_n = std::sqrt(static_cast<double>(law.n()));
    std::vector<CramerRow> rows;
    rows.reserve(x_grid.size());
    for (double x : x_grid) {
        CramerRow r;
        r.x = x;
        r.log_p_w = log_tail_above(law, rv, x);
        r.log_p_z = normal_log_tail(x);
        r.ratio = std::exp(r.log_p_w - r.log_p_z);
        r.normalized_residual = std::fabs(r.ratio - 1.0) * sqrt_n / (1.0 + x * x * x);
        rows.push_back(r);
    }
    return rows;
}

std::vector<CramerRow> cramer_experiment(const ModelParams& p, const std::vector<double>& x_grid,
                                         const std::optional<Interval>& condition) {
    MagnetizationLaw law = build_law(p);
    double center_m = 0.0;
    if (condition) {
        law = conditional_law(law, *condition);
        const PhasePortrait pt = analyze_phase(p.couplings());
        bool found = false;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& q : pt.stationary_points) {
            if (q.phi_dd > 0.0 && condition->contains(q.m) && q.phi_value < best) {
                best = q.phi_value;
                center_m = q.m;
                found = true;
            }
        }
        if (!found) throw std::invalid_argument("cramer_experiment: no local minimum inside the window");
    } else {
        center_m = m_star(p.couplings()).m;  // throws CoexistenceError on the curve
    }
    return cramer_ratio(law, phase_rescaling(p, center_m), x_grid);
}

std::vector<MdpRow> mdp_table(const MagnetizationLaw& law, const Rescaling& rv, double a_n,
                              const std::vector<double>& x_grid) {
    if (!(a_n > 0.0)) throw std::domain_error("mdp_table: a_n > 0 required");
    std::vector<MdpRow> rows;
    rows.reserve(x_grid.size());
    for (double x : x_grid) {
        MdpRow r;
        r.x = x;
        r.a_n = a_n;
        r.value = log_tail_above(law, rv, a_n * x) / (a_n * a_n);
        r.limit = -x * x / 2.0;
        rows.push_back(r);
    }
    return rows;
}

RTermDiagnostics r_term_diagnostics(const MagnetizationLaw& law, const Rescaling& rv, double m_phase) {
    const ModelParams& p = law.params;
    const double n = static_cast<double>(p.n);
    const double lambda = lambda_linear(p, m_phase);
    KahanSum r1_acc, r3_acc;
    for (long j = 0; j < law.size(); ++j) {
        const double prob = law.pmf(j);
        if (prob == 0.0) continue;
        const double s = law.s_of(j);
        const double m = s / n;
        const FlipMeans fm = conditional_flip_mean(s, p);
        const double frac_up = (n + s) / (2.0 * n);
        const double frac_dn = (n - s) / (2.0 * n);
        const double t_full = std::tanh(p.J * m + p.K * m * m);
        const double r1 = (t_full - (frac_up * fm.t_plus + frac_dn * fm.t_minus)) / rv.scale;
        const double r3 =
            2.0 * ((frac_up * fm.t_plus - frac_dn * fm.t_minus) - m * t_full) / (rv.scale * rv.scale);
        r1_acc.add(prob * std::fabs(r1));
        r3_acc.add(prob * std::fabs(r3) / (2.0 * lambda));
    }
    return {r1_acc.value(), r3_acc.value()};
}

CramerHypothesisConstants cramer_hypothesis_constants(const MagnetizationLaw& law, const Rescaling& rv,
                                                      const RegressionDecomposition& decomp, double d) {
    CramerHypothesisConstants out;
    out.d = d;
    const double bound = d * std::sqrt(static_cast<double>(law.n()));
    for (long j = 0; j < law.size(); ++j) {
        if (law.pmf(j) == 0.0) continue;
        const double s = law.s_of(j);
        const double w = rv.w_of(s);
        if (std::fabs(w) > bound) continue;
        const double D = exact_delta2(s, law.params, rv) / (2.0 * decomp.lambda);
        out.delta1 = std::max(out.delta1, std::fabs(D - 1.0) / (1.0 + std::fabs(w)));
        out.theta = std::max(out.theta, std::fabs(D));
        const double rr = decomp.remainder(s, law.params, rv) / decomp.lambda;
        out.delta2 = std::max(out.delta2, std::fabs(rr) / (1.0 + w * w));
    }
    return out;
}

namespace {

bool phase_is_zero(Couplings c) {
    const PhasePortrait pt = analyze_phase(c);
    return pt.global_minimizers.size() == 1 && std::fabs(pt.global_minimizers.front().m) <= 1e-8;
}

std::vector<NonUniformRow> nonuniform_table(const MagnetizationLaw& law, const Rescaling& rv,
                                            const std::function<double(double)>& target_cdf,
                                            const std::function<double(double)>& drift,
                                            std::size_t max_rows) {
    std::vector<NonUniformRow> rows;
    const long stride = std::max<long>(1, law.size() / static_cast<long>(max_rows));
    double left = 0.0;
    for (long j = 0; j < law.size(); ++j) {
        const double w = rv.w_of(law.s_of(j));
        if (j % stride == 0) {
            const double t = target_cdf(w);
            const double diff = std::max(std::fabs(law.cdf_prefix[j] - t), std::fabs(left - t));
            rows.push_back({w, diff, diff * (1.0 + std::fabs(drift(w)))});
        }
        left = law.cdf_prefix[j];
    }
    return rows;
}

}  // namespace

ThresholdResult threshold_experiment(ThresholdCase which, double alpha, const std::vector<long>& n_grid,
                                     double delta, double k_exponent, int workers) {
    if (!(alpha < 0.0)) throw std::invalid_argument("threshold_experiment: alpha < 0 required");
    if (n_grid.empty()) throw std::invalid_argument("threshold_experiment: empty n grid");
    if ((which == ThresholdCase::SlowerNormalVariance || which == ThresholdCase::SlowerNormalPower34) &&
        !(delta > 0.0 && delta < 0.25)) {
        throw std::invalid_argument("threshold_experiment: delta in (0, 1/4) required");
    }
    if (which == ThresholdCase::FasterQuartic && !(k_exponent > 0.5)) {
        throw std::invalid_argument("threshold_experiment: K_n exponent must exceed 1/2");
    }

    ThresholdResult res;
    res.which = which;
    res.alpha = alpha;
    res.delta = delta;
    res.k_exponent = k_exponent;
    res.rows.resize(n_grid.size());
    std::vector<std::vector<NonUniformRow>> tables(n_grid.size());

    parallel_for(static_cast<long>(n_grid.size()), [&](long i) {
        const long n = n_grid[i];
        const double nn = static_cast<double>(n);
        double K_n = 0.0;
        switch (which) {
            case ThresholdCase::MixedAtRootN: K_n = 1.0 / std::sqrt(nn); break;
            case ThresholdCase::FasterQuartic: K_n = std::pow(nn, -k_exponent); break;
            case ThresholdCase::SlowerNormalVariance:
            case ThresholdCase::SlowerNormalPower34: K_n = std::pow(nn, -2.0 * delta); break;
        }
        const double J_n = 1.0 + alpha * K_n;
        ThresholdRow row{n, K_n, J_n, 0.0, false};
        if (phase_is_zero({K_n, J_n})) {
            const ModelParams p{K_n, J_n, n};
            const MagnetizationLaw law = build_law(p);
            const Rescaling rv = which == ThresholdCase::SlowerNormalVariance
                                     ? variance_rescaling(n, J_n)
                                     : power_rescaling(n, 0.75);
            std::function<double(double)> cdf;
            std::function<double(double)> drift;
            if (which == ThresholdCase::MixedAtRootN || which == ThresholdCase::FasterQuartic) {
                auto target = std::make_shared<LimitDensity>(
                    which == ThresholdCase::MixedAtRootN ? LimitDensity::mixed(alpha, J_n)
                                                         : LimitDensity::quartic(J_n));
                cdf = [target](double z) { return target->cdf(z); };
                drift = [target](double z) { return target->g_of(z); };
            } else {
                cdf = [](double z) { return normal_cdf(z); };
                drift = [](double z) { return z; };
            }
            row.d_k = kolmogorov_to_cdf(law, rv, cdf);
            row.included = true;
            tables[i] = nonuniform_table(law, rv, cdf, drift, 1024);
        }
        res.rows[i] = row;
    }, workers);

    std::vector<std::pair<double, double>> pairs;
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        if (res.rows[i].included) {
            pairs.emplace_back(static_cast<double>(res.rows[i].n), res.rows[i].d_k);
            res.nonuniform_largest = tables[i];
        }
    }
    if (pairs.size() >= 2) res.fit = fit_power_law(pairs);
    return res;
}

std::vector<Alpha0Row> alpha0_exploration(const std::vector<long>& n_grid, int workers) {
    std::vector<Alpha0Row> rows(n_grid.size());
    parallel_for(static_cast<long>(n_grid.size()), [&](long i) {
        const long n = n_grid[i];
        const double K_n = std::pow(static_cast<double>(n), -0.25);
        const ModelParams p{K_n, 1.0, n};
        const double m_n = m_star(p.couplings()).m;
        const MagnetizationLaw law = build_law(p);
        const Rescaling rv{static_cast<double>(n) * m_n, std::pow(static_cast<double>(n), 0.75)};
        const LimitDensity candidate =
            LimitDensity::from_poly({0.0, 0.0, 1.5, -1.0 / 3.0, 1.0 / 12.0});
        const LimitDensity quartic = LimitDensity::quartic(1.0);
        Alpha0Row r;
        r.n = n;
        r.K_n = K_n;
        r.m_n = m_n;
        r.d_k_candidate = kolmogorov_to_cdf(law, rv, [&](double z) { return candidate.cdf(z); });
        r.d_k_quartic = kolmogorov_to_cdf(law, rv, [&](double z) { return quartic.cdf(z); });
        r.d_k_normal = kolmogorov_to_cdf(law, rv, [](double z) { return normal_cdf(z); });
        rows[i] = r;
    }, workers);
    return rows;
}

}  // namespace cubicw
