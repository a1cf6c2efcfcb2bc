#include "hedgekit/bootstrap.hpp"

#include <algorithm>
#include <cmath>

#include "hedgekit/rng.hpp"

namespace hedgekit {

std::vector<std::size_t> resample_indices(std::size_t n, std::size_t replicate,
                                          std::uint64_t master_seed) {
    if (n == 0) throw BootstrapError("resample_indices: n must be positive");
    rng::Generator gen(rng::derive_seed(master_seed, replicate));
    std::vector<std::size_t> idx(n);
    for (auto& i : idx) i = gen.next_index(n);
    return idx;
}

Interval percentile_interval(std::vector<double> values, double level) {
    if (values.empty()) throw BootstrapError("percentile_interval: no replicate values");
    if (!(level > 0.0 && level < 1.0)) {
        throw BootstrapError("percentile_interval: level must lie in (0, 1)");
    }
    std::sort(values.begin(), values.end());
    const double alpha = 1.0 - level;
    const auto b = static_cast<double>(values.size());
    auto order_stat = [&](double q) {
        auto k = static_cast<std::size_t>(std::ceil(q * b));
        k = std::clamp<std::size_t>(k, 1, values.size());
        return values[k - 1];
    };
    return {order_stat(alpha / 2.0), order_stat(1.0 - alpha / 2.0)};
}

namespace {

std::vector<double> gather(std::span<const double> x, const std::vector<std::size_t>& idx) {
    std::vector<double> out(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) out[i] = x[idx[i]];
    return out;
}

}  // namespace

Interval metric_ci(std::span<const double> returns, const MetricSpec& metric,
                   const BootstrapSpec& spec) {
    if (spec.replicates < 2) throw BootstrapError("metric_ci: need at least 2 replicates");
    std::vector<double> values;
    values.reserve(spec.replicates);
    std::size_t failures = 0;
    for (std::size_t b = 0; b < spec.replicates; ++b) {
        const auto idx = resample_indices(returns.size(), b, spec.master_seed);
        try {
            values.push_back(evaluate_metric(gather(returns, idx), metric));
        } catch (const MetricError&) {
            ++failures;
        }
    }
    if (failures * 10 > spec.replicates) {
        throw BootstrapError("metric_ci: metric failed on " + std::to_string(failures) +
                             " of " + std::to_string(spec.replicates) + " replicates");
    }
    return percentile_interval(std::move(values), spec.level);
}

TestResult difference_test(std::span<const double> portfolio_a,
                           std::span<const double> portfolio_b,
                           const MetricSpec& metric, const BootstrapSpec& spec) {
    if (spec.paired && portfolio_a.size() != portfolio_b.size()) {
        throw BootstrapError("difference_test: paired portfolios must have equal length");
    }
    if (spec.replicates < 2) {
        throw BootstrapError("difference_test: need at least 2 replicates");
    }

    TestResult res;
    res.point_diff =
        evaluate_metric(portfolio_a, metric) - evaluate_metric(portfolio_b, metric);

    std::vector<double> diffs;
    diffs.reserve(spec.replicates);
    std::size_t failures = 0;
    for (std::size_t b = 0; b < spec.replicates; ++b) {
        const auto idx_a = resample_indices(portfolio_a.size(), b, spec.master_seed);
        const auto idx_b = spec.paired
                               ? idx_a
                               : resample_indices(portfolio_b.size(), b,
                                                  rng::splitmix64(spec.master_seed) + 1);
        try {
            diffs.push_back(evaluate_metric(gather(portfolio_a, idx_a), metric) -
                            evaluate_metric(gather(portfolio_b, idx_b), metric));
        } catch (const MetricError&) {
            ++failures;
        }
    }
    if (failures * 10 > spec.replicates) {
        throw BootstrapError("difference_test: metric failed on " +
                             std::to_string(failures) + " replicates");
    }

    double mean = 0.0;
    for (double d : diffs) mean += d;
    mean /= static_cast<double>(diffs.size());
    double ss = 0.0;
    for (double d : diffs) ss += (d - mean) * (d - mean);
    const double se = std::sqrt(ss / static_cast<double>(diffs.size() - 1));
    res.t_stat = se > 0.0 ? res.point_diff / se : 0.0;

    res.ci = percentile_interval(std::move(diffs), spec.level);
    res.significant = res.ci.lo > 0.0 || res.ci.hi < 0.0;
    return res;
}

}  // namespace hedgekit
