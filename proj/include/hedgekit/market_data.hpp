#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hedgekit {

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One settlement row of a raw futures contract file.
struct ContractBar {
    std::string date;  // ISO yyyy-mm-dd, trusted as a trading day
    std::string contract_id;
    double price = 0.0;
    std::int64_t volume = 0;
};

// Continuous front-contract price path built by volume rollover.
struct ContinuousSeries {
    std::vector<std::string> dates;
    std::vector<double> prices;
    std::vector<std::string> front_id;
    std::vector<bool> rollover_flags;  // true on the day the front switches

    std::size_t size() const { return dates.size(); }
};

enum class RolloverHandling {
    SkipBoundary,  // drop the return spanning a contract switch (default)
    RawSplice      // keep the spliced return
};

// Aligned spot/futures log-return pair with the in/out split carried along.
struct ReturnPair {
    std::vector<std::string> dates;
    std::vector<double> r_s;
    std::vector<double> r_f;
    std::size_t n_in = 0;
    std::size_t n_out = 0;

    std::size_t size() const { return dates.size(); }
};

// Contiguous view of one sample (prefix = in-sample, suffix = out-of-sample).
struct SampleView {
    std::size_t begin = 0;
    std::size_t end = 0;  // half-open

    std::size_t size() const { return end - begin; }
};

// Switches the front contract forward when its volume falls below the volume
// of the next contract in line. Contracts are ordered by first appearance;
// the front never reverts to an abandoned contract.
ContinuousSeries build_continuous(const std::vector<ContractBar>& bars);

struct LogReturnSeries {
    std::vector<std::string> dates;
    std::vector<double> values;
};

// r_t = ln(p_t) - ln(p_{t-1}). Under SkipBoundary, returns that span a
// rollover day are omitted.
LogReturnSeries log_returns(const ContinuousSeries& series,
                            RolloverHandling handling = RolloverHandling::SkipBoundary);

// Aligns two return series on common dates.
ReturnPair align_returns(const LogReturnSeries& spot, const LogReturnSeries& futures);

// Builds a pair directly from aligned price columns (bypasses rollover).
ReturnPair returns_from_prices(const std::vector<std::string>& dates,
                               const std::vector<double>& spot_prices,
                               const std::vector<double>& futures_prices);

// Marks the first n_in observations as in-sample and the next n_out as
// out-of-sample; throws DataError naming the required length when short.
void split_sample(ReturnPair& pair, std::size_t n_in, std::size_t n_out);

SampleView in_sample(const ReturnPair& pair);
SampleView out_of_sample(const ReturnPair& pair);

}  // namespace hedgekit
