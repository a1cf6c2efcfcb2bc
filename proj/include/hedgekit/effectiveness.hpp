#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "hedgekit/hedge_models.hpp"
#include "hedgekit/market_data.hpp"
#include "hedgekit/risk_metrics.hpp"

namespace hedgekit {

enum class HedgeSide { Short, Long };
enum class Sample { In, Out };

std::string side_name(HedgeSide side);
std::string sample_name(Sample sample);

// Payoff series of one hedged position over one sample.
// Short: r_s - beta_t * r_f. Long is the exact negation.
struct HedgedPortfolio {
    HedgeSide side = HedgeSide::Short;
    ModelId model = ModelId::None;
    Sample sample = Sample::In;
    std::vector<std::string> dates;
    std::vector<double> returns;
};

HedgedPortfolio hedged_returns(const ReturnPair& pair, const HedgeRatioSeries& betas,
                               HedgeSide side, Sample sample);

// HE = 1 - hedged / baseline; baseline must be strictly positive.
double he_ratio(double hedged_value, double baseline_value);

// Worst (largest) risk value wins; ties break in favor of None.
ModelId baseline_select(const std::vector<std::pair<ModelId, double>>& values);

struct EffectivenessRow {
    Sample sample;
    HedgeSide side;
    ModelId model;
    MetricKind metric;
    double raw_value = 0.0;
    double he_value = 0.0;  // fraction, not percent
    ModelId baseline_model = ModelId::None;
};

struct EffectivenessTable {
    std::vector<EffectivenessRow> rows;

    const EffectivenessRow* find(Sample sample, HedgeSide side, ModelId model,
                                 MetricKind metric) const;
};

// Full cross product {in, out} x {short, long} x models x metrics, with the
// baseline chosen per (sample, side, metric) cell group. Output ordering is
// deterministic: sample, side, model, metric.
EffectivenessTable build_table(
    const ReturnPair& pair,
    const std::map<ModelId, HedgeRatioSeries>& in_sample_betas,
    const std::map<ModelId, HedgeRatioSeries>& out_sample_betas,
    const std::vector<MetricSpec>& metrics);

// Best (lowest-risk) model per (sample, side, metric) cell.
struct BestModelRow {
    Sample sample;
    HedgeSide side;
    MetricKind metric;
    ModelId model;
};

std::vector<BestModelRow> best_models(const EffectivenessTable& table);

}  // namespace hedgekit
