#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hedgekit/rng.hpp"
#include "hedgekit/risk_metrics.hpp"

using namespace hedgekit;

namespace {

// Independent full-sort oracles, kept free of the implementation path.
double oracle_var(std::vector<double> x, double confidence) {
    std::sort(x.begin(), x.end());
    const auto k = static_cast<std::size_t>(
        std::ceil((1.0 - confidence) * static_cast<double>(x.size())));
    return -x[k - 1];
}

double oracle_cvar(std::vector<double> x, double confidence) {
    std::sort(x.begin(), x.end());
    const auto k = static_cast<std::size_t>(
        std::ceil((1.0 - confidence) * static_cast<double>(x.size())));
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) s += x[i];
    return -s / static_cast<double>(k);
}

double oracle_lpm(const std::vector<double>& x, double order, double target) {
    double s = 0.0;
    for (double v : x) {
        if (v < target) s += std::pow(target - v, order);
    }
    return s / static_cast<double>(x.size());
}

std::vector<double> random_returns(std::size_t n, std::uint64_t seed) {
    rng::Generator gen(seed);
    std::vector<double> x(n);
    for (auto& v : x) v = 0.02 * gen.next_normal();
    return x;
}

}  // namespace

TEST_CASE("variance basics") {
    CHECK(variance_metric(std::vector<double>(10, 0.5)) == 0.0);
    CHECK(variance_metric(std::vector<double>{-1.0, 1.0}) == doctest::Approx(2.0));
    const auto x = random_returns(77, 1);
    std::vector<double> neg(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
    CHECK(variance_metric(x) == doctest::Approx(variance_metric(neg)).epsilon(1e-14));
    CHECK_THROWS_AS(variance_metric(std::vector<double>{1.0}), MetricError);
}

TEST_CASE("LPM hand cases") {
    const std::vector<double> all_up = {0.1, 0.2, 0.0};
    CHECK(lpm_metric(all_up, 3.0, 0.0) == 0.0);

    // LPM0 is the empirical shortfall probability
    const std::vector<double> half = {-1.0, 1.0, 1.0, -1.0};
    CHECK(lpm_metric(half, 0.0, 0.0) == doctest::Approx(0.5));

    const std::vector<double> mixed = {-0.2, 0.1, -0.1, 0.3};
    CHECK(lpm_metric(mixed, 3.0, 0.0) == doctest::Approx(0.00225).epsilon(1e-12));
}

TEST_CASE("LPM invariants") {
    const auto x = random_returns(300, 2);

    // LPM0 at zero target equals the fraction of negative returns exactly
    std::size_t below = 0;
    for (double v : x) {
        if (v < 0.0) ++below;
    }
    CHECK(lpm_metric(x, 0.0, 0.0) ==
          doctest::Approx(double(below) / double(x.size())).epsilon(1e-15));

    // non-decreasing in the target
    CHECK(lpm_metric(x, 2.0, 0.0) <= lpm_metric(x, 2.0, 0.01));
    CHECK(lpm_metric(x, 2.0, 0.01) <= lpm_metric(x, 2.0, 0.02));

    // for returns bounded in (-1,1) with zero target, non-increasing in order
    CHECK(lpm_metric(x, 1.0, 0.0) >= lpm_metric(x, 2.0, 0.0));
    CHECK(lpm_metric(x, 2.0, 0.0) >= lpm_metric(x, 3.0, 0.0));
}

TEST_CASE("VaR order-statistic definition") {
    std::vector<double> x = random_returns(100, 3);
    *std::min_element(x.begin(), x.end()) = -0.05;
    // keep -0.05 as the minimum
    for (auto& v : x) v = std::max(v, -0.05);
    CHECK(value_at_risk(x, 0.99) == doctest::Approx(0.05));

    const std::vector<double> gains(120, 0.01);
    CHECK(value_at_risk(gains, 0.99) == doctest::Approx(-0.01));

    CHECK_THROWS_AS(value_at_risk(random_returns(50, 4), 0.99), MetricError);
}

TEST_CASE("VaR and CVaR match full-sort oracles on random data") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto x = random_returns(200 + 17 * seed, 100 + seed);
        for (double conf : {0.95, 0.99}) {
            CHECK(value_at_risk(x, conf) == oracle_var(x, conf));
            CHECK(cvar(x, conf) == doctest::Approx(oracle_cvar(x, conf)).epsilon(1e-14));
        }
    }
}

TEST_CASE("CVaR tail mean") {
    auto x = random_returns(100, 5);
    x[0] = -0.10;
    for (std::size_t i = 1; i < x.size(); ++i) x[i] = std::max(x[i], -0.09);
    // singleton tail: CVaR == VaR
    CHECK(cvar(x, 0.99) == doctest::Approx(value_at_risk(x, 0.99)));
    CHECK(cvar(x, 0.99) == doctest::Approx(0.10));

    auto y = random_returns(200, 6);
    y[0] = -0.10;
    y[1] = -0.08;
    for (std::size_t i = 2; i < y.size(); ++i) y[i] = std::max(y[i], -0.07);
    CHECK(cvar(y, 0.99) == doctest::Approx(0.09));
}

TEST_CASE("CVaR dominates VaR on every series") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto x = random_returns(150 + seed, 200 + seed);
        for (double conf : {0.95, 0.99}) {
            CHECK(cvar(x, conf) >= value_at_risk(x, conf));
        }
    }
}

TEST_CASE("tail measures are side-symmetric") {
    // VaR of p equals the upper-tail VaR of -p: computed on the negated
    // series as the loss of the mirrored position
    const auto x = random_returns(400, 7);
    std::vector<double> neg(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];

    std::vector<double> sorted(x);
    std::sort(sorted.begin(), sorted.end());
    const auto k = static_cast<std::size_t>(std::ceil(0.01 * sorted.size()));
    // k-th largest of -p is the negation of the k-th smallest of p
    std::vector<double> sorted_neg(neg);
    std::sort(sorted_neg.begin(), sorted_neg.end(), std::greater<>());
    CHECK(value_at_risk(x, 0.99) == doctest::Approx(sorted_neg[k - 1]));
}

TEST_CASE("metrics are translation-covariant") {
    const auto x = random_returns(250, 8);
    std::vector<double> shifted(x.size());
    const double c = 0.013;
    for (std::size_t i = 0; i < x.size(); ++i) shifted[i] = x[i] + c;

    CHECK(variance_metric(shifted) == doctest::Approx(variance_metric(x)).epsilon(1e-12));
    CHECK(value_at_risk(shifted, 0.99) ==
          doctest::Approx(value_at_risk(x, 0.99) - c).epsilon(1e-12));
    CHECK(cvar(shifted, 0.99) == doctest::Approx(cvar(x, 0.99) - c).epsilon(1e-12));
    // shifting the target with the series leaves the LPM unchanged
    CHECK(lpm_metric(shifted, 3.0, c) == doctest::Approx(lpm_metric(x, 3.0, 0.0)).epsilon(1e-12));
}

TEST_CASE("LPM against brute-force oracle") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto x = random_returns(100 + 31 * seed, 300 + seed);
        for (double order : {0.0, 1.0, 2.0, 3.0}) {
            CHECK(lpm_metric(x, order, 0.0) ==
                  doctest::Approx(oracle_lpm(x, order, 0.0)).epsilon(1e-13));
        }
    }
}
