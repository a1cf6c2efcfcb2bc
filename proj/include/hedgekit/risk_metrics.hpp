#pragma once

#include <span>
#include <stdexcept>
#include <string>

namespace hedgekit {

struct MetricError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class MetricKind { Variance, Lpm, Var, Cvar };

std::string metric_name(MetricKind kind);

// Parameters for one risk measure. Defaults follow the evaluation setup:
// LPM order 3 around a zero target, 99% confidence, 1-day horizon.
struct MetricSpec {
    MetricKind kind = MetricKind::Variance;
    double lpm_order = 3.0;
    double lpm_target = 0.0;
    double confidence = 0.99;

    static MetricSpec variance() { return {MetricKind::Variance}; }
    static MetricSpec lpm(double order = 3.0, double target = 0.0) {
        return {MetricKind::Lpm, order, target};
    }
    static MetricSpec var(double confidence = 0.99) {
        return {MetricKind::Var, 3.0, 0.0, confidence};
    }
    static MetricSpec cvar(double confidence = 0.99) {
        return {MetricKind::Cvar, 3.0, 0.0, confidence};
    }
};

// Sample variance with n-1 denominator.
double variance_metric(std::span<const double> returns);

// (1/N) * sum max(0, target - r)^order over all observations.
double lpm_metric(std::span<const double> returns, double order, double target);

// Empirical quantile: minus the k-th smallest return, k = ceil((1-x)*n),
// no interpolation. Positive values are losses.
double value_at_risk(std::span<const double> returns, double confidence);

// Mean of the k worst losses (inclusive tail, same k as VaR).
double cvar(std::span<const double> returns, double confidence);

double evaluate_metric(std::span<const double> returns, const MetricSpec& spec);

}  // namespace hedgekit
