#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <vector>

#include "cubicw/grids.hpp"
#include "cubicw/parallel.hpp"
#include "cubicw/ratefit.hpp"

using namespace cubicw;

TEST_CASE("grid parsing") {
    SUBCASE("single value") {
        const auto g = parse_grid("3.5");
        REQUIRE(g.size() == 1);
        CHECK(g[0] == 3.5);
    }
    SUBCASE("geometric") {
        const auto g = parse_grid("1024:65536:x2");
        REQUIRE(g.size() == 7);
        CHECK(g.front() == 1024.0);
        CHECK(g.back() == 65536.0);
        CHECK(g[3] == 8192.0);
    }
    SUBCASE("arithmetic includes both endpoints") {
        const auto g = parse_grid("0:5:0.5");
        REQUIRE(g.size() == 11);
        CHECK(g.front() == 0.0);
        CHECK(g.back() == doctest::Approx(5.0));
    }
    SUBCASE("rejects malformed input") {
        CHECK_THROWS_AS(parse_grid("1:2"), std::invalid_argument);
        CHECK_THROWS_AS(parse_grid("1:2:x1"), std::invalid_argument);
        CHECK_THROWS_AS(parse_grid("1:2:0"), std::invalid_argument);
        CHECK_THROWS_AS(parse_grid("2:1:0.5"), std::invalid_argument);
        CHECK_THROWS_AS(parse_grid("a:b:c"), std::invalid_argument);
        CHECK_THROWS_AS(parse_grid("1:2:0.5junk"), std::invalid_argument);
        CHECK_THROWS_AS(parse_grid("0:2:x2"), std::invalid_argument);
    }
    SUBCASE("integer grids must increase") {
        const auto g = parse_n_grid("1024:8192:x2");
        REQUIRE(g.size() == 4);
        CHECK(g[0] == 1024);
        CHECK(g[3] == 8192);
        CHECK_THROWS_AS(parse_n_grid("0:8:1"), std::invalid_argument);
        CHECK_THROWS_AS(parse_n_grid("5:5.4:0.2"), std::invalid_argument);
    }
}

TEST_CASE("power-law fit recovers synthetic exponents") {
    for (double p : {-0.5, -0.25, 1.0}) {
        std::vector<std::pair<double, double>> pairs;
        for (double x : {16.0, 32.0, 64.0, 128.0, 1024.0}) {
            pairs.emplace_back(x, 2.7 * std::pow(x, p));
        }
        const auto fit = fit_power_law(pairs);
        CHECK(std::fabs(fit.slope - p) <= 1e-10);
        CHECK(std::fabs(std::exp(fit.intercept) - 2.7) <= 1e-9);
        CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    }

    std::vector<std::pair<double, double>> noisy{{10, 1.0}, {20, 0.8}, {40, 0.3}, {80, 0.31}};
    const auto fit = fit_power_law(noisy);
    CHECK(fit.r_squared >= 0.0);
    CHECK(fit.r_squared <= 1.0);

    CHECK_THROWS_AS(fit_power_law({{10.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(fit_power_law({{10.0, 1.0}, {20.0, -1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(fit_power_law({{10.0, 1.0}, {10.0, 2.0}}), std::invalid_argument);
}

TEST_CASE("parallel map computes every index in caller storage order") {
    const long N = 5000;
    std::vector<double> out(N, -1.0);
    parallel_for(N, [&](long i) { out[i] = std::sqrt(static_cast<double>(i)); });
    for (long i = 0; i < N; ++i) CHECK(out[i] == std::sqrt(static_cast<double>(i)));

    std::vector<double> single(N, -1.0);
    parallel_for(N, [&](long i) { single[i] = std::sqrt(static_cast<double>(i)); }, 1);
    CHECK(single == out);

    std::atomic<long> count{0};
    parallel_for(1000, [&](long) { count.fetch_add(1); }, 7);
    CHECK(count.load() == 1000);

    CHECK_THROWS_AS(
        parallel_for(100, [](long i) { if (i == 37) throw std::runtime_error("boom"); }, 4),
        std::runtime_error);
}
