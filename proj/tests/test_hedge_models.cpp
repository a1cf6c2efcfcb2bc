#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hedgekit/hedge_models.hpp"
#include "hedgekit/rng.hpp"

using namespace hedgekit;

namespace {

ReturnPair make_pair(std::size_t n, std::uint64_t seed) {
    rng::Generator gen(seed);
    ReturnPair pair;
    for (std::size_t i = 0; i < n; ++i) {
        pair.dates.push_back("d" + std::to_string(i));
        const double f = 0.015 * gen.next_normal();
        pair.r_f.push_back(f);
        pair.r_s.push_back(0.8 * f + 0.005 * gen.next_normal());
    }
    pair.n_in = n;
    return pair;
}

// two-pass covariance oracle
double oracle_beta(const ReturnPair& pair, std::size_t begin, std::size_t end) {
    double xs = 0.0, ys = 0.0;
    const double n = static_cast<double>(end - begin);
    for (std::size_t t = begin; t < end; ++t) {
        xs += pair.r_f[t];
        ys += pair.r_s[t];
    }
    xs /= n;
    ys /= n;
    double num = 0.0, den = 0.0;
    for (std::size_t t = begin; t < end; ++t) {
        num += (pair.r_f[t] - xs) * (pair.r_s[t] - ys);
        den += (pair.r_f[t] - xs) * (pair.r_f[t] - xs);
    }
    return num / den;
}

}  // namespace

TEST_CASE("constant ratio models") {
    const std::vector<std::string> dates = {"a", "b", "c", "d", "e"};
    const auto none = constant_ratio(ModelId::None, dates);
    const auto naive = constant_ratio(ModelId::Naive, dates);
    CHECK(none.beta == std::vector<double>(5, 0.0));
    CHECK(naive.beta == std::vector<double>(5, 1.0));
    CHECK(constant_ratio(ModelId::Naive, {}).beta.empty());
    CHECK_THROWS_AS(constant_ratio(ModelId::Ols, dates), ModelError);
}

TEST_CASE("ols_window_fit identity and exact linear cases") {
    ReturnPair pair = make_pair(50, 1);
    pair.r_s = pair.r_f;
    CHECK(ols_window_fit(pair, 0, 50).beta == doctest::Approx(1.0).epsilon(1e-14));

    for (std::size_t t = 0; t < pair.size(); ++t) pair.r_s[t] = 0.5 * pair.r_f[t] + 0.002;
    const auto fit = ols_window_fit(pair, 0, 50);
    CHECK(fit.beta == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fit.alpha == doctest::Approx(0.002).epsilon(1e-12));
}

TEST_CASE("ols_window_fit matches the two-pass covariance oracle") {
    const auto pair = make_pair(20, 2);
    const auto fit = ols_window_fit(pair, 0, 20);
    CHECK(fit.beta == doctest::Approx(oracle_beta(pair, 0, 20)).epsilon(1e-12));
}

TEST_CASE("ols_window_fit error paths") {
    ReturnPair pair = make_pair(30, 3);
    for (auto& v : pair.r_f) v = 0.001;  // zero futures variance
    CHECK_THROWS_AS(ols_window_fit(pair, 0, 30), ModelError);
    CHECK_THROWS_AS(ols_window_fit(make_pair(10, 4), 5, 40), ModelError);
}

TEST_CASE("ols_hedge is constant on constant-relation data") {
    ReturnPair pair = make_pair(260, 5);
    for (std::size_t t = 0; t < pair.size(); ++t) pair.r_s[t] = 0.7 * pair.r_f[t];
    split_sample(pair, 160, 100);

    for (OlsMode mode : {OlsMode::InSample, OlsMode::OutOfSample}) {
        const auto series = ols_hedge(pair, mode);
        for (double b : series.beta) CHECK(b == doctest::Approx(0.7).epsilon(1e-10));
    }
    CHECK(ols_hedge(pair, OlsMode::InSample).size() == 160);
    CHECK(ols_hedge(pair, OlsMode::OutOfSample).size() == 100);
}

TEST_CASE("rolling windows differ from the full-sample fit on heterogeneous data") {
    ReturnPair pair = make_pair(260, 6);
    // different relation in the first 60 observations
    for (std::size_t t = 0; t < 60; ++t) pair.r_s[t] = 1.5 * pair.r_f[t];
    split_sample(pair, 160, 100);

    OlsConfig rolling;
    const auto series = ols_hedge(pair, OlsMode::OutOfSample, rolling);

    OlsConfig full;
    full.full_sample = true;
    const auto flat = ols_hedge(pair, OlsMode::OutOfSample, full);

    bool any_diff = false;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const std::size_t t = pair.n_in + i;
        // each rolling estimate matches the per-window oracle
        CHECK(series.beta[i] ==
              doctest::Approx(oracle_beta(pair, t - rolling.window_len, t)).epsilon(1e-12));
        if (std::fabs(series.beta[i] - flat.beta[i]) > 1e-6) any_diff = true;
    }
    CHECK(any_diff);
}

TEST_CASE("in-sample windows end at t-1 after warm-up") {
    ReturnPair pair = make_pair(200, 7);
    split_sample(pair, 160, 40);
    OlsConfig config;
    const auto series = ols_hedge(pair, OlsMode::InSample, config);
    REQUIRE(series.size() == 160);
    // past the warm-up, each beta must match the oracle over [t-60, t)
    for (std::size_t t = config.window_len + 1; t < 160; t += 13) {
        CHECK(series.beta[t] ==
              doctest::Approx(oracle_beta(pair, t - config.window_len, t)).epsilon(1e-12));
    }
    // expanding phase
    CHECK(series.beta[45] == doctest::Approx(oracle_beta(pair, 0, 45)).epsilon(1e-12));
}

TEST_CASE("ols_hedge rejects oversized windows") {
    ReturnPair pair = make_pair(100, 8);
    split_sample(pair, 80, 20);
    OlsConfig config;
    config.window_len = 90;
    CHECK_THROWS_AS(ols_hedge(pair, OlsMode::InSample, config), ModelError);
}
