#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>

namespace hedgekit {

struct StatsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TestStat {
    double statistic = 0.0;
    bool reject_1pct = false;
    bool reject_5pct = false;
};

// Table-1 battery for one return series. Shape statistics are plain
// standardized central moments (no small-sample correction); kurtosis is
// reported in excess of 3.
struct SummaryStats {
    std::size_t n = 0;
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    double std_dev = 0.0;  // n-1 denominator
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    bool shape_defined = true;  // false for constant series
    TestStat bera_jarque;
    TestStat lm_arch;
    TestStat adf;
};

double sample_mean(std::span<const double> x);
double sample_variance(std::span<const double> x);  // n-1 denominator
double sample_skewness(std::span<const double> x);
double sample_excess_kurtosis(std::span<const double> x);

// Regularized lower incomplete gamma P(a, x); chi-square CDF with k degrees
// of freedom is P(k/2, x/2).
double gamma_p(double a, double x);
double chi2_cdf(double x, double df);
double chi2_critical(double df, double alpha);  // upper-tail

// Engle's LM test: n*R^2 from the regression of squared demeaned returns on
// their own lags, against chi-square(lags).
TestStat lm_arch(std::span<const double> returns, std::size_t lags = 5);

// Dickey-Fuller with constant: t-statistic on the level coefficient in the
// differenced regression, against the asymptotic critical values -3.43 / -2.86.
TestStat adf_test(std::span<const double> series, std::size_t lags = 0);

SummaryStats summary_stats(std::span<const double> returns,
                           std::size_t lm_lags = 5, std::size_t adf_lags = 0);

}  // namespace hedgekit
