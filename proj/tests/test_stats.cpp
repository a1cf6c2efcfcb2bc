#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "hedgekit/rng.hpp"
#include "hedgekit/stats.hpp"

using namespace hedgekit;

namespace {

std::vector<double> normal_sample(std::size_t n, std::uint64_t seed) {
    rng::Generator gen(seed);
    std::vector<double> x(n);
    for (auto& v : x) v = gen.next_normal();
    return x;
}

std::vector<double> arch1_sample(std::size_t n, double alpha, std::uint64_t seed) {
    rng::Generator gen(seed);
    std::vector<double> x(n);
    double h = 1.0 / (1.0 - alpha);
    double eps = 0.0;
    for (std::size_t t = 0; t < n + 100; ++t) {
        h = 1.0 + alpha * eps * eps;
        eps = std::sqrt(h) * gen.next_normal();
        if (t >= 100) x[t - 100] = eps;
    }
    return x;
}

}  // namespace

TEST_CASE("chi-square helper reproduces standard critical values") {
    CHECK(chi2_critical(2.0, 0.01) == doctest::Approx(9.2103).epsilon(1e-3));
    CHECK(chi2_critical(2.0, 0.05) == doctest::Approx(5.9915).epsilon(1e-3));
    CHECK(chi2_critical(5.0, 0.05) == doctest::Approx(11.0705).epsilon(1e-3));
    CHECK(chi2_critical(5.0, 0.01) == doctest::Approx(15.0863).epsilon(1e-3));
    CHECK(chi2_cdf(9.2103, 2.0) == doctest::Approx(0.99).epsilon(1e-4));
}

TEST_CASE("moments on hand-checkable samples") {
    const std::vector<double> sym = {-0.5, 0.5, -0.5, 0.5, -0.5, 0.5};
    CHECK(sample_skewness(sym) == doctest::Approx(0.0).epsilon(1e-14));

    // skewness is odd, excess kurtosis even under negation
    const auto x = normal_sample(500, 7);
    std::vector<double> neg(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
    CHECK(sample_skewness(neg) == doctest::Approx(-sample_skewness(x)).epsilon(1e-12));
    CHECK(sample_excess_kurtosis(neg) ==
          doctest::Approx(sample_excess_kurtosis(x)).epsilon(1e-12));
}

TEST_CASE("Bera-Jarque is zero when skewness and excess kurtosis vanish") {
    // two-point symmetric sample has S = 0 and K = -2; build the statistic
    // by hand instead from the formula path
    std::vector<double> x(40);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = i % 2 == 0 ? -1.0 : 1.0;
    const auto s = summary_stats(x, 5, 0);
    CHECK(s.skewness == doctest::Approx(0.0).epsilon(1e-14));
    // BJ contribution from skewness is zero; the remainder comes from K
    const double expected = 40.0 * (s.excess_kurtosis * s.excess_kurtosis / 24.0);
    CHECK(s.bera_jarque.statistic == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("summary stats on a simulated normal sample") {
    // |skew| < 0.08 and |excess kurtosis| < 0.15 in at least 95% of seeds
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto x = normal_sample(10000, 1000 + seed);
        if (std::fabs(sample_skewness(x)) < 0.08 &&
            std::fabs(sample_excess_kurtosis(x)) < 0.15) {
            ++ok;
        }
    }
    CHECK(ok >= 95);
}

TEST_CASE("summary stats ordering and flags") {
    const auto x = normal_sample(500, 11);
    const auto s = summary_stats(x);
    CHECK(s.min <= s.mean);
    CHECK(s.mean <= s.max);
    CHECK(s.std_dev >= 0.0);
    CHECK(s.shape_defined);
    CHECK(s.bera_jarque.statistic >= 0.0);

    std::vector<double> constant(50, 0.003);
    const auto c = summary_stats(constant);
    CHECK_FALSE(c.shape_defined);
    CHECK(std::isnan(c.skewness));
}

TEST_CASE("summary_stats rejects short input") {
    CHECK_THROWS_AS(summary_stats(std::vector<double>(5, 1.0)), StatsError);
}

TEST_CASE("LM ARCH size on i.i.d. normal data") {
    int rejections = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        if (lm_arch(normal_sample(1000, 2000 + seed), 5).reject_5pct) ++rejections;
    }
    // nominal size 5%; allow up to ~7%
    CHECK(rejections <= 14);
}

TEST_CASE("LM ARCH power on strong ARCH(1)") {
    int rejections = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        if (lm_arch(arch1_sample(1000, 0.8, 3000 + seed), 5).reject_5pct) ++rejections;
    }
    CHECK(rejections >= 95);
}

TEST_CASE("LM ARCH error paths") {
    CHECK_THROWS_AS(lm_arch(std::vector<double>(1000, 0.25), 5), StatsError);
    CHECK_THROWS_AS(lm_arch(normal_sample(12, 1), 5), StatsError);
}

TEST_CASE("ADF keeps a random walk and rejects i.i.d. returns") {
    int rw_fail_to_reject = 0;
    int iid_reject = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        rng::Generator gen(4000 + seed);
        std::vector<double> walk(500);
        double level = 0.0;
        for (auto& v : walk) {
            level += gen.next_normal();
            v = level;
        }
        if (!adf_test(walk, 0).reject_5pct) ++rw_fail_to_reject;
        if (adf_test(normal_sample(500, 5000 + seed), 0).reject_5pct) ++iid_reject;
    }
    CHECK(rw_fail_to_reject >= 180);  // >= 90%
    CHECK(iid_reject >= 198);         // >= 99%
}

TEST_CASE("ADF rejects degenerate input") {
    std::vector<double> ramp(100);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = double(i);
    CHECK_THROWS_AS(adf_test(ramp, 0), StatsError);
    CHECK_THROWS_AS(adf_test(std::vector<double>(10, 0.0), 0), StatsError);
}
