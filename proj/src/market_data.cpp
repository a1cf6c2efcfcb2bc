#include "hedgekit/market_data.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

namespace hedgekit {

ContinuousSeries build_continuous(const std::vector<ContractBar>& bars) {
    if (bars.empty()) {
        throw DataError("build_continuous: empty contract input");
    }

    // date -> contract -> bar, with duplicate detection
    std::map<std::string, std::unordered_map<std::string, const ContractBar*>> by_date;
    std::vector<std::string> contract_order;  // by first appearance
    std::set<std::string> seen_contracts;
    bool any_volume = false;
    for (const auto& bar : bars) {
        if (!(bar.price > 0.0)) {
            throw DataError("build_continuous: non-positive price on " + bar.date +
                            " contract " + bar.contract_id);
        }
        if (bar.volume < 0) {
            throw DataError("build_continuous: negative volume on " + bar.date);
        }
        if (bar.volume > 0) any_volume = true;
        auto& day = by_date[bar.date];
        if (!day.emplace(bar.contract_id, &bar).second) {
            throw DataError("build_continuous: duplicate row for (" + bar.date + ", " +
                            bar.contract_id + ")");
        }
        if (seen_contracts.insert(bar.contract_id).second) {
            contract_order.push_back(bar.contract_id);
        }
    }
    if (!any_volume) {
        throw DataError("build_continuous: no volume data in input");
    }

    std::unordered_map<std::string, std::size_t> rank;
    for (std::size_t i = 0; i < contract_order.size(); ++i) rank[contract_order[i]] = i;

    ContinuousSeries out;
    out.dates.reserve(by_date.size());
    std::size_t front = 0;  // index into contract_order

    for (const auto& [date, day] : by_date) {
        // If the current front has no bar today, advance to the earliest
        // listed contract that does (forward only).
        std::size_t active = front;
        while (active < contract_order.size() && !day.count(contract_order[active])) {
            ++active;
        }
        if (active == contract_order.size()) {
            throw DataError("build_continuous: no tradable contract on " + date);
        }

        // Volume rule: switch when the front's volume falls below the next
        // contract's volume on the same day.
        std::size_t chosen = active;
        if (active + 1 < contract_order.size()) {
            auto next_it = day.find(contract_order[active + 1]);
            auto cur_it = day.find(contract_order[active]);
            if (next_it != day.end() && cur_it != day.end() &&
                cur_it->second->volume < next_it->second->volume) {
                chosen = active + 1;
            }
        }

        const bool rolled = !out.dates.empty() && chosen != front;
        front = chosen;
        const ContractBar* bar = day.at(contract_order[chosen]);
        out.dates.push_back(date);
        out.prices.push_back(bar->price);
        out.front_id.push_back(bar->contract_id);
        out.rollover_flags.push_back(rolled);
    }
    return out;
}

LogReturnSeries log_returns(const ContinuousSeries& series, RolloverHandling handling) {
    if (series.size() < 2) {
        throw DataError("log_returns: need at least 2 prices");
    }
    LogReturnSeries out;
    out.dates.reserve(series.size() - 1);
    for (std::size_t t = 1; t < series.size(); ++t) {
        if (!(series.prices[t] > 0.0) || !(series.prices[t - 1] > 0.0)) {
            throw DataError("log_returns: non-positive price at " + series.dates[t]);
        }
        if (handling == RolloverHandling::SkipBoundary && series.rollover_flags[t]) {
            continue;  // return spans a contract switch
        }
        out.dates.push_back(series.dates[t]);
        out.values.push_back(std::log(series.prices[t]) - std::log(series.prices[t - 1]));
    }
    return out;
}

ReturnPair align_returns(const LogReturnSeries& spot, const LogReturnSeries& futures) {
    std::unordered_map<std::string, double> fut;
    fut.reserve(futures.dates.size());
    for (std::size_t i = 0; i < futures.dates.size(); ++i) {
        fut[futures.dates[i]] = futures.values[i];
    }
    ReturnPair pair;
    for (std::size_t i = 0; i < spot.dates.size(); ++i) {
        auto it = fut.find(spot.dates[i]);
        if (it == fut.end()) continue;
        pair.dates.push_back(spot.dates[i]);
        pair.r_s.push_back(spot.values[i]);
        pair.r_f.push_back(it->second);
    }
    if (pair.dates.empty()) {
        throw DataError("align_returns: no overlapping dates between spot and futures");
    }
    pair.n_in = pair.size();
    pair.n_out = 0;
    return pair;
}

ReturnPair returns_from_prices(const std::vector<std::string>& dates,
                               const std::vector<double>& spot_prices,
                               const std::vector<double>& futures_prices) {
    if (dates.size() != spot_prices.size() || dates.size() != futures_prices.size()) {
        throw DataError("returns_from_prices: column length mismatch");
    }
    if (dates.size() < 2) {
        throw DataError("returns_from_prices: need at least 2 rows");
    }
    ReturnPair pair;
    for (std::size_t t = 1; t < dates.size(); ++t) {
        if (!(spot_prices[t] > 0.0) || !(futures_prices[t] > 0.0) ||
            !(spot_prices[t - 1] > 0.0) || !(futures_prices[t - 1] > 0.0)) {
            throw DataError("returns_from_prices: non-positive price at " + dates[t]);
        }
        pair.dates.push_back(dates[t]);
        pair.r_s.push_back(std::log(spot_prices[t]) - std::log(spot_prices[t - 1]));
        pair.r_f.push_back(std::log(futures_prices[t]) - std::log(futures_prices[t - 1]));
    }
    pair.n_in = pair.size();
    pair.n_out = 0;
    return pair;
}

void split_sample(ReturnPair& pair, std::size_t n_in, std::size_t n_out) {
    if (n_in + n_out > pair.size()) {
        throw DataError("split_sample: need " + std::to_string(n_in + n_out) +
                        " observations, have " + std::to_string(pair.size()));
    }
    pair.n_in = n_in;
    pair.n_out = n_out;
}

SampleView in_sample(const ReturnPair& pair) { return {0, pair.n_in}; }

SampleView out_of_sample(const ReturnPair& pair) {
    return {pair.n_in, pair.n_in + pair.n_out};
}

}  // namespace hedgekit
