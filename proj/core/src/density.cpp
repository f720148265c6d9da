#include "cubicw/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cubicw {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;

double poly_eval(const std::vector<double>& c, double y) {
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * y + c[i];
    return acc;
}

double poly_deriv_eval(const std::vector<double>& c, double y) {
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > 1;) acc = acc * y + static_cast<double>(i) * c[i];
    return acc;
}
}  // namespace

double GSpec::g(double x) const {
    return a1 * std::pow(x, 2 * k - 1) + a2 * std::pow(x, 2 * k + 1);
}

double GSpec::G(double y) const {
    return a1 * std::pow(y, 2 * k) / (2.0 * k) + a2 * std::pow(y, 2 * k + 2) / (2.0 * k + 2.0);
}

LimitDensity LimitDensity::from_g(double quadratic_coeff, const GSpec& gspec, double quad_tol) {
    if (quadratic_coeff < 0.0) throw std::invalid_argument("LimitDensity: quadratic_coeff >= 0 required");
    if (gspec.k < 1) throw std::invalid_argument("LimitDensity: g-family index k >= 1 required");
    std::vector<double> coeffs(2 * gspec.k + 3, 0.0);
    coeffs[2] += quadratic_coeff / 2.0;
    coeffs[2 * gspec.k] += gspec.a1 / (2.0 * gspec.k);
    coeffs[2 * gspec.k + 2] += gspec.a2 / (2.0 * gspec.k + 2.0);
    return LimitDensity(std::move(coeffs), quad_tol);
}

LimitDensity LimitDensity::from_poly(const std::vector<double>& G_coeffs, double quad_tol) {
    return LimitDensity(G_coeffs, quad_tol);
}

LimitDensity LimitDensity::gaussian(double quad_tol) {
    return from_poly({0.0, 0.0, 0.5}, quad_tol);
}

LimitDensity LimitDensity::quartic(double J, double quad_tol) {
    return from_poly({0.0, 0.0, 0.0, 0.0, J * J * J / 12.0}, quad_tol);
}

LimitDensity LimitDensity::mixed(double alpha, double J, double quad_tol) {
    if (alpha > 0.0) throw std::invalid_argument("LimitDensity::mixed: alpha <= 0 required");
    return from_poly({0.0, 0.0, -alpha / 2.0, 0.0, J * J * J / 12.0}, quad_tol);
}

LimitDensity::LimitDensity(std::vector<double> G_coeffs, double quad_tol)
    : G_(std::move(G_coeffs)), tol_(quad_tol) {
    while (!G_.empty() && G_.back() == 0.0) G_.pop_back();
    if (G_.size() < 3) throw IntegrabilityError("LimitDensity: exponent must grow at least quadratically");
    const std::size_t deg = G_.size() - 1;
    if (deg % 2 != 0 || G_[deg] <= 0.0)
        throw IntegrabilityError("LimitDensity: leading exponent term must be an even power with positive coefficient");
    if (!G_.empty()) G_[0] = 0.0;
    normalize_and_tabulate();
}

double LimitDensity::G(double y) const { return poly_eval(G_, y); }
double LimitDensity::g_of(double y) const { return poly_deriv_eval(G_, y); }
double LimitDensity::c() const { return std::exp(log_c_); }
double LimitDensity::pdf(double y) const { return std::exp(log_c_ - G(y)); }

namespace {
// Shift used to keep exp(-(G - shift)) in [0, 1]: a grid minimum of G.
double grid_min(const std::vector<double>& c, double L) {
    double mn = std::numeric_limits<double>::infinity();
    const int N = 4096;
    for (int i = 0; i <= N; ++i) {
        mn = std::min(mn, poly_eval(c, -L + 2.0 * L * i / N));
    }
    return mn;
}
}  // namespace

void LimitDensity::normalize_and_tabulate() {
    // Truncation window: beyond L the exponent must be increasing outward and
    // at least 60 above its minimum, making the discarded tails < 1e-18 of
    // the mass. A doubling re-check guards the choice.
    double L = 2.0;
    double shift = grid_min(G_, L);
    for (int it = 0;; ++it) {
        if (it > 256 || !(L < 1e8)) throw IntegrabilityError("LimitDensity: no usable truncation window found");
        shift = std::min(shift, grid_min(G_, L));
        const double up = G(L) - shift, dn = G(-L) - shift;
        const double gp = g_of(L), gm = g_of(-L);
        if (gp > 0.0 && gm < 0.0 && up >= 60.0 && dn >= 60.0 &&
            std::exp(-up) / gp <= 1e-18 && std::exp(-dn) / (-gm) <= 1e-18) {
            break;
        }
        L *= 1.5;
    }

    auto shifted = [this, shift](double y) { return std::exp(-(G(y) - shift)); };
    for (int guard = 0;; ++guard) {
        panels_.clear();
        const QuadResult inner = integrate(shifted, -L, L, 0.0, std::min(tol_, 1e-12), &panels_);
        const QuadResult outer = integrate(shifted, -2.0 * L, 2.0 * L, 0.0, std::min(tol_, 1e-12));
        if (std::fabs(outer.value - inner.value) <= 1e-13 * outer.value) {
            log_c_ = shift - std::log(inner.value);
            break;
        }
        if (guard > 8) throw IntegrabilityError("LimitDensity: truncation window failed to converge under doubling");
        L *= 2.0;
        shift = std::min(shift, grid_min(G_, L));
    }
    L_ = L;
    shift_ = shift;

    panel_cum_.resize(panels_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < panels_.size(); ++i) {
        acc += panels_[i].value;
        panel_cum_[i] = acc;
    }
}

double LimitDensity::cdf(double z) const {
    if (z <= -L_) return 0.0;
    if (z >= L_) return 1.0;
    const double total = panel_cum_.back();
    // first panel with b > z
    std::size_t lo = 0, hi = panels_.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (panels_[mid].b > z) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    const double before = lo == 0 ? 0.0 : panel_cum_[lo - 1];
    const double shift = shift_;
    const auto f = [this, shift](double y) { return std::exp(-(G(y) - shift)); };
    const double partial = z > panels_[lo].a ? kronrod15(f, panels_[lo].a, z) : 0.0;
    return std::clamp((before + partial) / total, 0.0, 1.0);
}

double LimitDensity::log_tail(double x) const {
    if (x <= -L_) return 0.0;  // log(1)
    // G minimum over the tail sets the scale of the dominant contribution
    double g_tail_min = std::numeric_limits<double>::infinity();
    const double probe_hi = std::max(x + 1.0, L_);
    for (int i = 0; i <= 1024; ++i) {
        g_tail_min = std::min(g_tail_min, G(x + (probe_hi - x) * i / 1024.0));
    }
    double U = probe_hi;
    for (int it = 0; it < 256 && (G(U) - g_tail_min < 80.0 || g_of(U) <= 0.0); ++it) {
        U += std::max(1.0, U - x);
    }
    const double s = std::min(shift_, g_tail_min);
    const auto f = [this, s](double y) { return std::exp(-(G(y) - s)); };
    const QuadResult q = integrate(f, x, U, 0.0, 1e-13);
    return log_c_ - s + std::log(q.value);
}

double LimitDensity::tail(double x) const { return std::exp(log_tail(x)); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

double normal_tail(double x) { return 0.5 * std::erfc(x / kSqrt2); }

double normal_log_tail(double x) {
    if (x < 30.0) return std::log(normal_tail(x));
    const double x2 = x * x;
    return -0.5 * x2 - std::log(x) - kLogSqrt2Pi + std::log1p(-1.0 / x2 + 3.0 / (x2 * x2));
}

}  // namespace cubicw
