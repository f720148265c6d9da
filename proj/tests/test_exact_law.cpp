#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "cubicw/density.hpp"
#include "cubicw/law.hpp"
#include "cubicw/phase.hpp"

using namespace cubicw;

namespace {

// Full configuration-space oracle: sums exp(-H) over all 2^n spin vectors.
std::vector<double> enumerate_pmf(const ModelParams& p) {
    const long n = p.n;
    std::vector<double> weight(n + 1, 0.0);
    double Z = 0.0;
    for (long cfg = 0; cfg < (1L << n); ++cfg) {
        long s = 0;
        for (long i = 0; i < n; ++i) s += (cfg >> i) & 1 ? 1 : -1;
        const double m = static_cast<double>(s) / n;
        const double w = std::exp(n * (p.K / 3.0 * m * m * m + p.J / 2.0 * m * m));
        weight[(s + n) / 2] += w;
        Z += w;
    }
    for (auto& w : weight) w /= Z;
    return weight;
}

double bisect_residual(Couplings c, double lo, double hi) {
    double flo = mean_field_residual(lo, c);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double f = mean_field_residual(mid, c);
        if ((flo < 0) != (f < 0)) {
            hi = mid;
        } else {
            lo = mid;
            flo = f;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("two fair independent spins") {
    const auto law = build_law({0.0, 0.0, 2});
    CHECK(law.pmf(0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(law.pmf(1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(law.pmf(2) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK_THROWS_AS(build_law({0.0, 0.0, 0}), std::invalid_argument);
}

TEST_CASE("law equals the configuration-space enumeration") {
    for (double K : {0.0, 0.35}) {
        for (double J : {0.0, 0.8, 2.0}) {
            for (long n : {1L, 5L, 12L}) {
                const ModelParams p{K, J, n};
                const auto oracle = enumerate_pmf(p);
                const auto law = build_law(p);
                for (long j = 0; j <= n; ++j) {
                    CHECK(std::fabs(law.pmf(j) - oracle[j]) <= 1e-12 * oracle[j]);
                }
            }
        }
    }
}

TEST_CASE("normalization, symmetry and cubic tilt") {
    SUBCASE("probabilities sum to one") {
        for (long n : {10L, 1000L, 65536L}) {
            const auto law = build_law({0.2, 0.9, n});
            long double sum = 0.0L;  // naive double accumulation would add ~n eps of measurement noise
            for (long j = 0; j <= n; ++j) sum += law.pmf(j);
            CHECK(std::fabs(static_cast<double>(sum - 1.0L)) <= 1e-12);
            CHECK(law.cdf_prefix.back() == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("K = 0 is exactly symmetric") {
        const auto law = build_law({0.0, 1.3, 501});
        for (long j = 0; j <= 501; ++j) {
            CHECK(law.pmf(j) == law.pmf(501 - j));
        }
    }
    SUBCASE("K > 0 favors positive magnetization") {
        const auto law = build_law({0.4, 0.7, 300});
        for (long j = 151; j <= 300; ++j) {
            CHECK(law.pmf(j) >= law.pmf(300 - j));
        }
    }
}

TEST_CASE("law of large numbers toward the pure phase") {
    const ModelParams p{0.2, 1.1, 10000};
    const double m = m_star(p.couplings()).m;
    const auto law = build_law(p);
    CHECK(std::fabs(mean_magnetization(law) - m) <= 0.01);
}

TEST_CASE("rescaled CDF basics") {
    const ModelParams p{0.2, 0.5, 400};
    const auto law = build_law(p);
    const auto rv = phase_rescaling(p, 0.0);
    CHECK(cdf_rescaled(law, rv, 1e9) == 1.0);
    CHECK(cdf_rescaled(law, rv, -1e9) == 0.0);

    // median bracketing by the largest atom
    const double mp = law.max_pmf();
    double q = 0.0;
    for (long j = 0; j <= p.n; ++j) {
        if (law.cdf_prefix[j] >= 0.5) {
            q = rv.w_of(law.s_of(j));
            break;
        }
    }
    const double F = cdf_rescaled(law, rv, q);
    CHECK(F >= 0.5 - mp);
    CHECK(F <= 0.5 + mp);
}

TEST_CASE("Kolmogorov distance evaluation") {
    const ModelParams p{0.1, 0.4, 200};
    const auto law = build_law(p);
    const auto rv = phase_rescaling(p, 0.0);

    SUBCASE("identity") {
        CHECK(kolmogorov_between(law, rv, law, rv) == 0.0);
    }
    SUBCASE("point mass at zero against the standard normal") {
        auto point = conditional_law(law, Interval{0.0, 0.0});
        CHECK(kolmogorov_to_cdf(point, rv, normal_cdf) == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("metric properties on a sampled triple") {
        const auto lawB = build_law(ModelParams{0.3, 0.8, 200});
        const auto lawC = build_law(ModelParams{0.0, 1.2, 150});
        const auto rvB = phase_rescaling(ModelParams{0.3, 0.8, 200}, 0.0);
        const Rescaling rvC{0.0, std::sqrt(150.0)};
        const double ab = kolmogorov_between(law, rv, lawB, rvB);
        const double ba = kolmogorov_between(lawB, rvB, law, rv);
        const double bc = kolmogorov_between(lawB, rvB, lawC, rvC);
        const double ac = kolmogorov_between(law, rv, lawC, rvC);
        CHECK(std::fabs(ab - ba) <= 1e-12);
        CHECK(ac <= ab + bc + 1e-12);
    }
}

TEST_CASE("conditioning") {
    SUBCASE("full window is the identity") {
        const auto law = build_law({0.25, 0.75, 64});
        const auto cond = conditional_law(law, Interval{-1.0, 1.0});
        for (long j = 0; j <= 64; ++j) CHECK(cond.pmf(j) == doctest::Approx(law.pmf(j)).epsilon(1e-15));
    }
    SUBCASE("two-phase conditioning recovers the positive phase") {
        const ModelParams p{0.0, 2.0, 2000};
        const double mbar = bisect_residual(p.couplings(), 0.5, 0.99);
        const auto cond = conditional_law(build_law(p), Interval{0.5, 1.0});
        CHECK(std::fabs(mean_magnetization(cond) - mbar) < 5e-3);
    }
    SUBCASE("half-line windows of a symmetric law mirror each other") {
        const auto law = build_law({0.0, 2.0, 999});
        const auto neg = conditional_law(law, Interval{-1.0, 0.0, true, false});
        const auto pos = conditional_law(law, Interval{0.0, 1.0, false, true});
        for (long j = 0; j <= 999; ++j) {
            CHECK(neg.pmf(j) == pos.pmf(999 - j));
        }
    }
    SUBCASE("empty window") {
        const auto law = build_law({0.1, 0.2, 10});
        CHECK_THROWS_AS(conditional_law(law, Interval{0.31, 0.35}), EmptyConditionError);
    }
}

TEST_CASE("moments of the rescaled variable") {
    SUBCASE("odd moments vanish by symmetry") {
        const ModelParams p{0.0, 0.5, 500};
        const auto law = build_law(p);
        const auto rv = phase_rescaling(p, 0.0);
        CHECK(std::fabs(moment(law, rv, 1)) <= 1e-15);
    }
    SUBCASE("unit variance in the CLT regime") {
        const ModelParams p{0.2, 0.5, 10000};
        const auto law = build_law(p);
        const auto rv = phase_rescaling(p, 0.0);
        CHECK(moment(law, rv, 2) == doctest::Approx(1.0).epsilon(0.05));
        CHECK(abs_moment(law, rv, 1) <= 2.0);
        const auto vals = moments(law, rv, {1, 2, 4});
        CHECK(vals.size() == 3);
        CHECK(vals[1] == doctest::Approx(moment(law, rv, 2)).epsilon(1e-15));
    }
}

TEST_CASE("log-domain tail agrees with the prefix CDF where both are exact") {
    const ModelParams p{0.2, 0.5, 4096};
    const auto law = build_law(p);
    const auto rv = phase_rescaling(p, 0.0);
    for (double x : {-1.0, 0.0, 0.5, 2.0}) {
        const double t1 = std::exp(log_tail_above(law, rv, x));
        const double t2 = 1.0 - cdf_rescaled(law, rv, x);
        CHECK(std::fabs(t1 - t2) <= 1e-12);
    }
    // deep tail stays finite in log domain
    const double lt = log_tail_above(law, rv, 10.0);
    CHECK(lt < -40.0);
    CHECK(std::isfinite(lt));
}
