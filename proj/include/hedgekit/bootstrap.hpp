#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "hedgekit/risk_metrics.hpp"

namespace hedgekit {

struct BootstrapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BootstrapSpec {
    std::size_t replicates = 100;
    double level = 0.99;
    std::uint64_t master_seed = 0;
    bool paired = true;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct TestResult {
    double point_diff = 0.0;
    double t_stat = 0.0;  // point_diff / bootstrap standard error
    Interval ci;          // percentile interval of the replicate differences
    bool significant = false;  // 0 outside the percentile interval
};

// n indices drawn uniformly with replacement; a pure function of
// (master_seed, replicate), independent of call order and threading.
std::vector<std::size_t> resample_indices(std::size_t n, std::size_t replicate,
                                          std::uint64_t master_seed);

// Percentile confidence interval of the metric over B resamples. Replicates
// where the metric fails are dropped; more than 10% failures aborts.
Interval metric_ci(std::span<const double> returns, const MetricSpec& metric,
                   const BootstrapSpec& spec);

// Paired (or independent) bootstrap difference test:
// diff_b = metric(a_b) - metric(b_b) per replicate.
TestResult difference_test(std::span<const double> portfolio_a,
                           std::span<const double> portfolio_b,
                           const MetricSpec& metric, const BootstrapSpec& spec);

// k-th order-statistic percentile rule shared by both interval computations.
Interval percentile_interval(std::vector<double> values, double level);

}  // namespace hedgekit
