#include "cubicw/phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace cubicw {

const char* to_string(PointKind k) {
    switch (k) {
        case PointKind::GlobalMin: return "global-min";
        case PointKind::LocalMin: return "local-min";
        case PointKind::LocalMax: return "local-max";
        case PointKind::Saddle: return "saddle";
    }
    return "?";
}

const char* to_string(PhaseLabel label) {
    switch (label) {
        case PhaseLabel::Paramagnetic: return "paramagnetic";
        case PhaseLabel::PolarizedLow: return "polarized-m1";
        case PhaseLabel::PolarizedHigh: return "polarized-m2";
        case PhaseLabel::Coexistence: return "coexistence";
        case PhaseLabel::Critical: return "critical";
    }
    return "?";
}

namespace {

double bisect_root(Couplings c, double lo, double hi, double tol) {
    double flo = mean_field_residual(lo, c);
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = mean_field_residual(mid, c);
        if (fm == 0.0) return mid;
        if ((flo < 0.0) != (fm < 0.0)) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::vector<EquilibriumPoint> find_stationary_points(Couplings c, const RootScanOptions& opt) {
    if (c.K < 0.0) throw std::invalid_argument("find_stationary_points: K >= 0 required");
    const double lo = -1.0 + kDomainEps;
    const double hi = 1.0 - kDomainEps;
    const long N = std::max<long>(opt.grid_points, 16);

    std::vector<double> roots;
    roots.push_back(0.0);  // tanh(0) = 0 for all (K, J); sign scans miss tangent roots
    double xprev = lo;
    double fprev = mean_field_residual(xprev, c);
    for (long k = 1; k < N; ++k) {
        const double x = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(N - 1);
        const double f = mean_field_residual(x, c);
        if (f == 0.0) {
            roots.push_back(x);
        } else if ((fprev < 0.0) != (f < 0.0)) {
            roots.push_back(bisect_root(c, xprev, x, opt.bisect_tol));
        }
        xprev = x;
        fprev = f;
    }

    std::sort(roots.begin(), roots.end());
    std::vector<double> merged;
    for (std::size_t i = 0; i < roots.size();) {
        std::size_t j = i;
        double best = roots[i];
        while (j + 1 < roots.size() && roots[j + 1] - roots[i] <= opt.dedup_tol) {
            ++j;
            // prefer the exact zero root inside a cluster
            if (roots[j] == 0.0) best = 0.0;
        }
        if (best != 0.0) {
            double bres = std::fabs(mean_field_residual(best, c));
            for (std::size_t k = i; k <= j; ++k) {
                const double r = std::fabs(mean_field_residual(roots[k], c));
                if (roots[k] == 0.0 || r < bres) {
                    best = roots[k];
                    bres = roots[k] == 0.0 ? -1.0 : r;
                }
            }
        }
        merged.push_back(best);
        i = j + 1;
    }

    std::vector<EquilibriumPoint> out;
    out.reserve(merged.size());
    for (double m : merged) {
        EquilibriumPoint p;
        p.m = m;
        p.phi_value = phi(m, c);
        p.phi_dd = phi_d2(m, c);
        if (p.phi_dd > opt.curvature_tol) {
            p.kind = PointKind::LocalMin;
        } else if (p.phi_dd < -opt.curvature_tol) {
            p.kind = PointKind::LocalMax;
        } else {
            p.kind = PointKind::Saddle;
        }
        out.push_back(p);
    }
    return out;
}

namespace {

// Degenerate stationary points (phi'' ~ 0) are minima only when phi'
// changes sign upward; a cubic inflection like m = 0 on the line J = 1
// sits within any depth tolerance of the true minimum and must not be
// mistaken for one.
bool is_minimum_candidate(const EquilibriumPoint& p, Couplings c, double curvature_tol) {
    if (p.phi_dd > curvature_tol) return true;
    if (p.phi_dd < -curvature_tol) return false;
    const double eps = 1e-6;
    const double lo = std::max(p.m - eps, -1.0 + kDomainEps);
    const double hi = std::min(p.m + eps, 1.0 - kDomainEps);
    return phi_d1(lo, c) < 0.0 && phi_d1(hi, c) > 0.0;
}

}  // namespace

PhasePortrait analyze_phase(Couplings c, const RootScanOptions& opt) {
    PhasePortrait pt;
    pt.params = c;
    pt.stationary_points = find_stationary_points(c, opt);

    // Global minimizers: minimum candidates of minimal depth. The boundary is
    // never minimizing (phi' diverges inward at |m| = 1).
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : pt.stationary_points) {
        if (is_minimum_candidate(p, c, opt.curvature_tol) && p.phi_value < best) best = p.phi_value;
    }
    if (!std::isfinite(best)) {
        for (const auto& p : pt.stationary_points) best = std::min(best, p.phi_value);
    }
    pt.inf_phi = best;
    for (auto& p : pt.stationary_points) {
        if (is_minimum_candidate(p, c, opt.curvature_tol) && p.phi_value <= best + opt.depth_tol) {
            p.kind = PointKind::GlobalMin;
            pt.global_minimizers.push_back(p);
        }
    }
    if (pt.global_minimizers.empty()) {
        throw std::logic_error("analyze_phase: no candidate minimizer found");
    }

    if (pt.global_minimizers.size() >= 2) {
        pt.phase_label = PhaseLabel::Coexistence;
    } else {
        const auto& g = pt.global_minimizers.front();
        if (std::fabs(g.m) <= 1e-8 && g.phi_dd <= opt.curvature_tol) {
            pt.phase_label = PhaseLabel::Critical;  // degenerate quartic bottom (K=0, J=1)
        } else if (std::fabs(g.m) <= 1e-8) {
            pt.phase_label = PhaseLabel::Paramagnetic;
        } else if (c.J >= 1.0) {
            pt.phase_label = PhaseLabel::PolarizedHigh;
        } else {
            pt.phase_label = PhaseLabel::PolarizedLow;
        }
    }
    return pt;
}

CoexistenceError::CoexistenceError(const EquilibriumPoint& lo, const EquilibriumPoint& hi)
    : std::runtime_error("coexistence: two equal-depth minima at m = " + std::to_string(lo.m) +
                         " and m = " + std::to_string(hi.m) + "; condition on a phase neighborhood"),
      low(lo),
      high(hi) {}

CriticalPointError::CriticalPointError()
    : std::runtime_error("critical point (K, J) = (0, 1): no pure phase with positive curvature") {}

Phase m_star(Couplings c, const RootScanOptions& opt) {
    const PhasePortrait pt = analyze_phase(c, opt);
    if (pt.phase_label == PhaseLabel::Coexistence) {
        throw CoexistenceError(pt.global_minimizers.front(), pt.global_minimizers.back());
    }
    if (pt.phase_label == PhaseLabel::Critical) throw CriticalPointError();
    return {pt.global_minimizers.front().m, pt.phase_label};
}

namespace {

// Best strictly positive local minimizer of phi, if any.
std::optional<EquilibriumPoint> positive_minimum(double K, double J, const RootScanOptions& scan) {
    std::optional<EquilibriumPoint> best;
    for (const auto& p : find_stationary_points({K, J}, scan)) {
        if (p.m > scan.dedup_tol && p.phi_dd > scan.curvature_tol) {
            if (!best || p.phi_value < best->phi_value) best = p;
        }
    }
    return best;
}

}  // namespace

GammaCurvePoint gamma_of_K(double K, const GammaOptions& opt) {
    if (!(K > 0.0)) throw std::invalid_argument("gamma_of_K: K > 0 required");
    if (!(opt.j_lo < opt.j_hi)) throw std::invalid_argument("gamma_of_K: empty J bracket");

    // D(J) = phi(0) - phi(m_+): negative while the zero phase is deeper,
    // positive once the polarized phase wins. Undefined while no positive
    // local minimum exists, which can only happen at the low-J end.
    auto depth_gap = [&](double J) -> std::optional<double> {
        const auto pm = positive_minimum(K, J, opt.scan);
        if (!pm) return std::nullopt;
        return phi(0.0, {K, J}) - pm->phi_value;
    };

    const int G = std::max(opt.bracket_grid, 3);
    bool any_defined = false;
    bool seen_defined = false;
    double prev = -std::numeric_limits<double>::infinity();
    double lo = opt.j_lo, hi = opt.j_hi;
    bool have_lo = false, have_hi = false;
    for (int i = 0; i < G; ++i) {
        const double J = opt.j_lo + (opt.j_hi - opt.j_lo) * static_cast<double>(i) / (G - 1);
        const auto d = depth_gap(J);
        if (!d) {
            if (seen_defined)
                throw BracketError("gamma_of_K: positive minimum vanished inside the bracket; refine the grid");
            // no positive well yet: the zero phase is strictly deeper here
            lo = J;
            have_lo = true;
            continue;
        }
        any_defined = true;
        seen_defined = true;
        if (*d < prev - 1e-13)
            throw BracketError("gamma_of_K: depth difference not monotone on the bracket grid; widen or refine");
        prev = *d;
        if (*d < 0.0) {
            lo = J;
            have_lo = true;
        } else if (!have_hi) {
            hi = J;
            have_hi = true;
        }
    }
    if (!any_defined)
        throw NoCoexistenceError("gamma_of_K: no strictly positive local minimizer anywhere in the J bracket");
    if (!have_lo || !have_hi)
        throw BracketError("gamma_of_K: depth difference does not change sign on the bracket; widen it");

    while (hi - lo > opt.j_tol) {
        const double mid = 0.5 * (lo + hi);
        const auto d = depth_gap(mid);
        if (d && *d >= 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    const double Jg = 0.5 * (lo + hi);
    const auto pm = positive_minimum(K, Jg, opt.scan);
    if (!pm) throw BracketError("gamma_of_K: lost the positive minimum during refinement");
    GammaCurvePoint out;
    out.K = K;
    out.J_gamma = Jg;
    out.m_low = 0.0;
    out.m_high = pm->m;
    out.equal_depth_gap = std::fabs(phi(0.0, {K, Jg}) - pm->phi_value);
    if (out.equal_depth_gap > opt.depth_tol)
        throw BracketError("gamma_of_K: equal-depth refinement stalled above tolerance");
    return out;
}

double rate_function(double m, const PhasePortrait& portrait) {
    return phi(m, portrait.params) - portrait.inf_phi;
}

double rate_function(double m, Couplings c) {
    return rate_function(m, analyze_phase(c));
}

std::vector<AsymptoticsRow> m_star_asymptotics(double alpha, const std::vector<double>& K_grid) {
    std::vector<AsymptoticsRow> rows;
    rows.reserve(K_grid.size());
    for (double K : K_grid) {
        AsymptoticsRow r;
        r.K = K;
        r.m_star = m_star({K, 1.0 + alpha * K}).m;
        if (alpha > 0.0) {
            r.predicted = std::sqrt(3.0 * alpha * K);
        } else if (alpha == 0.0) {
            r.predicted = 3.0 * K;
        } else {
            r.predicted = 0.0;
        }
        r.ratio = r.predicted != 0.0 ? r.m_star / r.predicted : std::numeric_limits<double>::quiet_NaN();
        rows.push_back(r);
    }
    return rows;
}

}  // namespace cubicw
