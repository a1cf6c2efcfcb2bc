#include "hedgekit/effectiveness.hpp"

#include <algorithm>
#include <cmath>

namespace hedgekit {

std::string side_name(HedgeSide side) {
    return side == HedgeSide::Short ? "short" : "long";
}

std::string sample_name(Sample sample) { return sample == Sample::In ? "in" : "out"; }

HedgedPortfolio hedged_returns(const ReturnPair& pair, const HedgeRatioSeries& betas,
                               HedgeSide side, Sample sample) {
    const SampleView view = sample == Sample::In ? in_sample(pair) : out_of_sample(pair);
    if (betas.size() != view.size()) {
        throw ModelError("hedged_returns: beta series length " +
                         std::to_string(betas.size()) + " does not match sample length " +
                         std::to_string(view.size()));
    }
    HedgedPortfolio out;
    out.side = side;
    out.model = betas.model;
    out.sample = sample;
    out.dates.reserve(view.size());
    out.returns.reserve(view.size());
    for (std::size_t i = 0; i < view.size(); ++i) {
        const std::size_t t = view.begin + i;
        if (betas.dates[i] != pair.dates[t]) {
            throw ModelError("hedged_returns: beta series misaligned at " + pair.dates[t]);
        }
        const double payoff = pair.r_s[t] - betas.beta[i] * pair.r_f[t];
        out.dates.push_back(pair.dates[t]);
        out.returns.push_back(side == HedgeSide::Short ? payoff : -payoff);
    }
    return out;
}

double he_ratio(double hedged_value, double baseline_value) {
    if (!(baseline_value > 0.0)) {
        throw ModelError("he_ratio: baseline risk value is not positive; "
                         "percentage reduction undefined");
    }
    return 1.0 - hedged_value / baseline_value;
}

ModelId baseline_select(const std::vector<std::pair<ModelId, double>>& values) {
    if (values.size() < 2) {
        throw ModelError("baseline_select: need at least two models");
    }
    ModelId worst = values.front().first;
    double worst_value = values.front().second;
    bool has_none = false;
    for (const auto& [model, value] : values) {
        if (model == ModelId::None) has_none = true;
        if (value > worst_value ||
            (value == worst_value && model == ModelId::None)) {
            worst = model;
            worst_value = value;
        }
    }
    if (!has_none) {
        throw ModelError("baseline_select: model set must include the no-hedge model");
    }
    return worst;
}

EffectivenessTable build_table(
    const ReturnPair& pair,
    const std::map<ModelId, HedgeRatioSeries>& in_sample_betas,
    const std::map<ModelId, HedgeRatioSeries>& out_sample_betas,
    const std::vector<MetricSpec>& metrics) {
    EffectivenessTable table;
    const Sample samples[] = {Sample::In, Sample::Out};
    const HedgeSide sides[] = {HedgeSide::Short, HedgeSide::Long};

    for (Sample sample : samples) {
        const auto& betas = sample == Sample::In ? in_sample_betas : out_sample_betas;
        if ((sample == Sample::In ? pair.n_in : pair.n_out) == 0) continue;
        for (HedgeSide side : sides) {
            // payoff per model, computed once per (sample, side)
            std::map<ModelId, HedgedPortfolio> portfolios;
            for (const auto& [model, series] : betas) {
                portfolios.emplace(model, hedged_returns(pair, series, side, sample));
            }
            for (const MetricSpec& metric : metrics) {
                std::vector<std::pair<ModelId, double>> values;
                for (const auto& [model, pf] : portfolios) {
                    values.emplace_back(model, evaluate_metric(pf.returns, metric));
                }
                const ModelId baseline = baseline_select(values);
                double baseline_value = 0.0;
                for (const auto& [model, value] : values) {
                    if (model == baseline) baseline_value = value;
                }
                for (const auto& [model, value] : values) {
                    EffectivenessRow row;
                    row.sample = sample;
                    row.side = side;
                    row.model = model;
                    row.metric = metric.kind;
                    row.raw_value = value;
                    row.baseline_model = baseline;
                    row.he_value = model == baseline ? 0.0 : he_ratio(value, baseline_value);
                    table.rows.push_back(row);
                }
            }
        }
    }

    // deterministic ordering: sample, side, model, metric
    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [](const EffectivenessRow& a, const EffectivenessRow& b) {
                         if (a.sample != b.sample) return a.sample < b.sample;
                         if (a.side != b.side) return a.side < b.side;
                         if (a.model != b.model) return a.model < b.model;
                         return a.metric < b.metric;
                     });
    return table;
}

const EffectivenessRow* EffectivenessTable::find(Sample sample, HedgeSide side,
                                                 ModelId model, MetricKind metric) const {
    for (const auto& row : rows) {
        if (row.sample == sample && row.side == side && row.model == model &&
            row.metric == metric) {
            return &row;
        }
    }
    return nullptr;
}

std::vector<BestModelRow> best_models(const EffectivenessTable& table) {
    std::vector<BestModelRow> out;
    for (const auto& row : table.rows) {
        auto it = std::find_if(out.begin(), out.end(), [&](const BestModelRow& b) {
            return b.sample == row.sample && b.side == row.side && b.metric == row.metric;
        });
        if (it == out.end()) {
            out.push_back({row.sample, row.side, row.metric, row.model});
            it = out.end() - 1;
        }
        const auto* current = table.find(row.sample, row.side, it->model, row.metric);
        if (current && row.raw_value < current->raw_value) {
            it->model = row.model;
        }
    }
    return out;
}

}  // namespace hedgekit
