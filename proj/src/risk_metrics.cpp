#include "hedgekit/risk_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace hedgekit {

std::string metric_name(MetricKind kind) {
    switch (kind) {
        case MetricKind::Variance: return "variance";
        case MetricKind::Lpm: return "lpm";
        case MetricKind::Var: return "var";
        case MetricKind::Cvar: return "cvar";
    }
    return "unknown";
}

double variance_metric(std::span<const double> returns) {
    if (returns.size() < 2) {
        throw MetricError("variance: need at least 2 observations");
    }
    double m = 0.0;
    for (double v : returns) m += v;
    m /= static_cast<double>(returns.size());
    double s = 0.0;
    for (double v : returns) s += (v - m) * (v - m);
    return s / static_cast<double>(returns.size() - 1);
}

double lpm_metric(std::span<const double> returns, double order, double target) {
    if (returns.empty()) throw MetricError("lpm: empty series");
    if (order < 0.0) throw MetricError("lpm: order must be non-negative");
    double s = 0.0;
    for (double v : returns) {
        const double shortfall = target - v;
        if (shortfall > 0.0) {
            s += order == 0.0 ? 1.0 : std::pow(shortfall, order);
        }
    }
    return s / static_cast<double>(returns.size());
}

namespace {
std::size_t tail_count(std::size_t n, double confidence) {
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw MetricError("var/cvar: confidence must lie in (0, 1)");
    }
    const auto required =
        static_cast<std::size_t>(std::ceil(1.0 / (1.0 - confidence)));
    if (n < required) {
        throw MetricError("var/cvar: need at least " + std::to_string(required) +
                          " observations at confidence " + std::to_string(confidence));
    }
    const auto k = static_cast<std::size_t>(
        std::ceil((1.0 - confidence) * static_cast<double>(n)));
    return std::max<std::size_t>(k, 1);
}
}  // namespace

double value_at_risk(std::span<const double> returns, double confidence) {
    if (returns.empty()) throw MetricError("var: empty series");
    const std::size_t k = tail_count(returns.size(), confidence);
    std::vector<double> sorted(returns.begin(), returns.end());
    std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
    return -sorted[k - 1];
}

double cvar(std::span<const double> returns, double confidence) {
    if (returns.empty()) throw MetricError("cvar: empty series");
    const std::size_t k = tail_count(returns.size(), confidence);
    std::vector<double> sorted(returns.begin(), returns.end());
    std::partial_sort(sorted.begin(), sorted.begin() + k, sorted.end());
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) s += sorted[i];
    return -s / static_cast<double>(k);
}

double evaluate_metric(std::span<const double> returns, const MetricSpec& spec) {
    switch (spec.kind) {
        case MetricKind::Variance: return variance_metric(returns);
        case MetricKind::Lpm: return lpm_metric(returns, spec.lpm_order, spec.lpm_target);
        case MetricKind::Var: return value_at_risk(returns, spec.confidence);
        case MetricKind::Cvar: return cvar(returns, spec.confidence);
    }
    throw MetricError("evaluate_metric: unknown kind");
}

}  // namespace hedgekit
