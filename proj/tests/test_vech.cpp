#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hedgekit/rng.hpp"
#include "hedgekit/vech.hpp"

using namespace hedgekit;

namespace {

VechParams realistic_params(bool asymmetric) {
    VechParams p;
    p.mu_s = 0.0004;
    p.mu_f = 0.0003;
    p.a_s = p.a_f = p.a_sf = 0.05;
    p.b_s = p.b_f = p.b_sf = 0.90;
    if (asymmetric) p.d_s = p.d_f = 0.10;
    // unconditional variances around daily-return scale
    const double hs = 4.0e-4, hf = 3.6e-4, hsf = 3.2e-4;
    p.c_s = hs * (1.0 - p.a_s - p.b_s - 0.5 * p.d_s);
    p.c_f = hf * (1.0 - p.a_f - p.b_f - 0.5 * p.d_f);
    p.c_sf = hsf * (1.0 - p.a_sf - p.b_sf);
    return p;
}

}  // namespace

TEST_CASE("parameter validation") {
    VechParams p = realistic_params(false);
    CHECK_NOTHROW(validate_params(p));
    p.c_s = 0.0;
    CHECK_THROWS_AS(validate_params(p), EstimationError);
    p = realistic_params(false);
    p.a_s = -0.1;
    CHECK_THROWS_AS(validate_params(p), EstimationError);
    p = realistic_params(false);
    p.a_s = 0.2;
    p.b_s = 0.85;
    CHECK_THROWS_AS(validate_params(p), EstimationError);
}

TEST_CASE("degenerate recursion returns the constant terms") {
    VechParams p;
    p.mu_s = p.mu_f = 0.0;
    p.c_s = 0.0004;
    p.c_f = 0.0003;
    p.c_sf = 0.0002;

    const auto pair = simulate_vech(realistic_params(false), 50, 42);
    FilterOptions opts;
    opts.init = Cov2{p.c_s, p.c_f, p.c_sf};
    const auto path = filter_moments(p, pair.r_s, pair.r_f, opts);
    for (std::size_t t = 0; t < path.size(); ++t) {
        CHECK(path.h_s[t] == doctest::Approx(p.c_s).epsilon(1e-14));
        CHECK(path.h_f[t] == doctest::Approx(p.c_f).epsilon(1e-14));
        CHECK(path.h_sf[t] == doctest::Approx(p.c_sf).epsilon(1e-14));
    }
}

TEST_CASE("one-step variance recursion by hand") {
    // H_f,1 = c + a*eps^2 + b*H_0, with and without the asymmetry term
    VechParams p;
    p.c_s = 0.1;
    p.c_f = 0.1;
    p.a_f = 0.2;
    p.b_f = 0.5;
    p.c_sf = 0.0;

    ReturnPair pair;
    pair.dates = {"d0", "d1"};
    pair.r_s = {0.0, 0.0};
    pair.r_f = {0.3, 0.0};  // eps_f,0 = 0.3 with mu_f = 0
    pair.n_in = 2;

    FilterOptions opts;
    opts.init = Cov2{1.0, 1.0, 0.0};
    auto path = filter_moments(p, pair.r_s, pair.r_f, opts);
    CHECK(path.h_f[1] == doctest::Approx(0.618).epsilon(1e-12));

    p.d_f = 0.1;
    opts.asymmetric = true;
    pair.r_f[0] = -0.3;
    path = filter_moments(p, pair.r_s, pair.r_f, opts);
    CHECK(path.h_f[1] == doctest::Approx(0.627).epsilon(1e-12));

    pair.r_f[0] = 0.3;  // indicator off
    path = filter_moments(p, pair.r_s, pair.r_f, opts);
    CHECK(path.h_f[1] == doctest::Approx(0.618).epsilon(1e-12));
}

TEST_CASE("asymmetric filter with d=0 reproduces the symmetric path exactly") {
    const VechParams p = realistic_params(false);
    const auto pair = simulate_vech(realistic_params(true), 260, 7);

    FilterOptions sym;
    FilterOptions asym;
    asym.asymmetric = true;
    const auto a = filter_moments(p, pair.r_s, pair.r_f, sym);
    const auto b = filter_moments(p, pair.r_s, pair.r_f, asym);
    for (std::size_t t = 0; t < a.size(); ++t) {
        CHECK(std::fabs(a.h_s[t] - b.h_s[t]) <= 1e-12);
        CHECK(std::fabs(a.h_f[t] - b.h_f[t]) <= 1e-12);
        CHECK(std::fabs(a.h_sf[t] - b.h_sf[t]) <= 1e-12);
    }
}

TEST_CASE("negative shock raises next-period variance by exactly d*x^2") {
    VechParams p = realistic_params(true);
    FilterOptions opts;
    opts.asymmetric = true;
    opts.init = Cov2{4.0e-4, 3.6e-4, 2.0e-4};

    const double x = 0.02;
    ReturnPair down, up;
    down.r_s = {p.mu_s - x, p.mu_s};
    down.r_f = {p.mu_f - x, p.mu_f};
    up.r_s = {p.mu_s + x, p.mu_s};
    up.r_f = {p.mu_f + x, p.mu_f};

    const auto path_down = filter_moments(p, down.r_s, down.r_f, opts);
    const auto path_up = filter_moments(p, up.r_s, up.r_f, opts);
    CHECK(path_down.h_f[1] - path_up.h_f[1] == doctest::Approx(p.d_f * x * x).epsilon(1e-12));
    CHECK(path_down.h_s[1] - path_up.h_s[1] == doctest::Approx(p.d_s * x * x).epsilon(1e-12));
}

TEST_CASE("filter output is invariant to a common shift of returns and means") {
    VechParams p = realistic_params(true);
    auto pair = simulate_vech(p, 120, 9);

    FilterOptions opts;
    opts.asymmetric = true;
    const auto base = filter_moments(p, pair.r_s, pair.r_f, opts);

    const double shift = 0.004;
    VechParams shifted = p;
    shifted.mu_s += shift;
    shifted.mu_f += shift;
    for (auto& v : pair.r_s) v += shift;
    for (auto& v : pair.r_f) v += shift;
    const auto moved = filter_moments(shifted, pair.r_s, pair.r_f, opts);
    for (std::size_t t = 0; t < base.size(); ++t) {
        CHECK(base.h_s[t] == doctest::Approx(moved.h_s[t]).epsilon(1e-12));
        CHECK(base.h_sf[t] == doctest::Approx(moved.h_sf[t]).epsilon(1e-12));
        CHECK(base.eps_s[t] == doctest::Approx(moved.eps_s[t]).epsilon(1e-12));
    }
}

TEST_CASE("likelihood at the standard-normal mode") {
    VechParams p;
    p.c_s = 1.0;
    p.c_f = 1.0;

    ReturnPair pair;
    pair.r_s = {0.0};
    pair.r_f = {0.0};
    FilterOptions opts;
    opts.init = Cov2{1.0, 1.0, 0.0};
    CHECK(neg_log_likelihood(p, pair.r_s, pair.r_f, opts) ==
          doctest::Approx(1.8378770664).epsilon(1e-9));
}

TEST_CASE("likelihood matches a closed-form bivariate density oracle for constant H") {
    VechParams p;
    p.mu_s = 0.001;
    p.mu_f = -0.002;
    p.c_s = 4.0e-4;
    p.c_f = 3.0e-4;
    p.c_sf = 1.5e-4;

    const auto pair = simulate_vech(realistic_params(false), 50, 11);
    FilterOptions opts;
    opts.init = Cov2{p.c_s, p.c_f, p.c_sf};

    // direct bivariate normal density summation
    const double det = p.c_s * p.c_f - p.c_sf * p.c_sf;
    double oracle = 0.0;
    for (std::size_t t = 0; t < pair.size(); ++t) {
        const double es = pair.r_s[t] - p.mu_s;
        const double ef = pair.r_f[t] - p.mu_f;
        const double quad = (p.c_f * es * es - 2.0 * p.c_sf * es * ef + p.c_s * ef * ef) / det;
        const double density =
            std::exp(-0.5 * quad) / (2.0 * M_PI * std::sqrt(det));
        oracle -= std::log(density);
    }
    CHECK(neg_log_likelihood(p, pair.r_s, pair.r_f, opts) ==
          doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("likelihood rejects non-stationary parameters before evaluation") {
    VechParams p = realistic_params(false);
    p.a_s = 0.3;
    p.b_s = 0.8;
    const auto pair = simulate_vech(realistic_params(false), 30, 13);
    CHECK_THROWS_AS(neg_log_likelihood(p, pair.r_s, pair.r_f, {}), EstimationError);
}

TEST_CASE("garch hedge ratios") {
    MomentPath path;
    path.h_s = {1.0, 1.0, 1.0};
    path.h_f = {0.5, 0.0005, 1.0};
    path.h_sf = {0.5, 0.0004, 0.0};
    path.eps_s = path.eps_f = {0.0, 0.0, 0.0};

    const auto series = garch_hedge_ratios(path, {"a", "b", "c"}, ModelId::Sdvech);
    CHECK(series.beta[0] == doctest::Approx(1.0));
    CHECK(series.beta[1] == doctest::Approx(0.8));
    CHECK(series.beta[2] == doctest::Approx(0.0));
}

TEST_CASE("simulation determinism and unconditional moments") {
    const VechParams p = realistic_params(false);
    const auto a = simulate_vech(p, 200, 123);
    const auto b = simulate_vech(p, 200, 123);
    CHECK(a.r_s == b.r_s);
    CHECK(a.r_f == b.r_f);
    CHECK(a.dates == b.dates);

    // a = b = 0: i.i.d. draws with covariance equal to the constant terms
    VechParams iid;
    iid.c_s = 4.0e-4;
    iid.c_f = 3.6e-4;
    iid.c_sf = 2.0e-4;
    const auto sample = simulate_vech(iid, 10000, 321);
    double vs = 0.0, vf = 0.0, csf = 0.0;
    for (std::size_t t = 0; t < sample.size(); ++t) {
        vs += sample.r_s[t] * sample.r_s[t];
        vf += sample.r_f[t] * sample.r_f[t];
        csf += sample.r_s[t] * sample.r_f[t];
    }
    const double n = static_cast<double>(sample.size());
    CHECK(vs / n == doctest::Approx(iid.c_s).epsilon(0.05));
    CHECK(vf / n == doctest::Approx(iid.c_f).epsilon(0.05));
    CHECK(csf / n == doctest::Approx(iid.c_sf).epsilon(0.05));
}

TEST_CASE("asymmetry shows up in the simulated conditional variances") {
    VechParams p = realistic_params(true);
    p.d_s = 0.15;
    const auto sample = simulate_vech(p, 20000, 77);

    // variance of r_s following a negative spot shock vs a positive one
    double var_after_neg = 0.0, var_after_pos = 0.0;
    std::size_t n_neg = 0, n_pos = 0;
    for (std::size_t t = 1; t < sample.size(); ++t) {
        const double prev = sample.r_s[t - 1] - p.mu_s;
        const double cur = sample.r_s[t] - p.mu_s;
        if (prev < 0.0) {
            var_after_neg += cur * cur;
            ++n_neg;
        } else {
            var_after_pos += cur * cur;
            ++n_pos;
        }
    }
    CHECK(var_after_neg / double(n_neg) > var_after_pos / double(n_pos));
}

TEST_CASE("fit recovers symmetric parameters from simulated data") {
    const VechParams truth = realistic_params(false);
    auto pair = simulate_vech(truth, 2000, 2024);
    split_sample(pair, 2000, 0);

    const FitResult fit = fit_vech(pair, false);
    CHECK(fit.converged);
    CHECK(fit.nll <= fit.initial_nll);

    CHECK(std::fabs(fit.params.a_s - truth.a_s) < 0.10);
    CHECK(std::fabs(fit.params.a_f - truth.a_f) < 0.10);
    CHECK(std::fabs(fit.params.b_s - truth.b_s) < 0.10);
    CHECK(std::fabs(fit.params.b_f - truth.b_f) < 0.10);
    CHECK(std::fabs(fit.params.mu_s - truth.mu_s) < 0.10);
    CHECK(std::fabs(fit.params.mu_f - truth.mu_f) < 0.10);

    // fitted likelihood within 2 log-points of the truth's likelihood
    FilterOptions opts;
    const double truth_nll = neg_log_likelihood(truth, pair.r_s, pair.r_f, opts);
    CHECK(fit.nll <= truth_nll + 2.0);
}

TEST_CASE("fit on i.i.d. data is close to the constant-covariance model") {
    VechParams iid;
    iid.c_s = 4.0e-4;
    iid.c_f = 3.6e-4;
    iid.c_sf = 2.0e-4;
    auto pair = simulate_vech(iid, 2000, 555);
    split_sample(pair, 2000, 0);

    const FitResult fit = fit_vech(pair, false);
    const double iid_nll = neg_log_likelihood(iid, pair.r_s, pair.r_f, {});
    CHECK(fit.nll <= iid_nll + 2.0);
}

TEST_CASE("fit rejects collinear inputs") {
    auto pair = simulate_vech(realistic_params(false), 300, 99);
    pair.r_f = pair.r_s;
    split_sample(pair, 300, 0);
    CHECK_THROWS_AS(fit_vech(pair, false), EstimationError);
}
