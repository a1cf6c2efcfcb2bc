#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "hedgekit/market_data.hpp"

namespace hedgekit {

struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ModelId { None, Naive, Ols, Sdvech, Asdvech };

std::string model_name(ModelId id);
ModelId model_from_name(const std::string& name);

// Per-date optimal hedge ratio for one model.
struct HedgeRatioSeries {
    ModelId model = ModelId::None;
    std::vector<std::string> dates;
    std::vector<double> beta;

    std::size_t size() const { return beta.size(); }
};

struct OlsFit {
    double alpha = 0.0;
    double beta = 0.0;
    std::size_t window_begin = 0;
    std::size_t window_end = 0;  // half-open
};

enum class OlsMode { InSample, OutOfSample };

struct OlsConfig {
    std::size_t window_len = 60;
    std::size_t min_window = 30;  // expanding warm-up starts here
    bool full_sample = false;     // single full-in-sample beta instead of rolling
};

// beta_t = 0 (None) or 1 (Naive) on every date.
HedgeRatioSeries constant_ratio(ModelId id, const std::vector<std::string>& dates);

// beta = cov(r_s, r_f) / var(r_f) over [begin, end).
OlsFit ols_window_fit(const ReturnPair& pair, std::size_t begin, std::size_t end);

// Rolling-window OLS hedge ratios over the requested sample. In-sample the
// window expands from min_window observations and then rolls at window_len;
// out-of-sample every window ends at t-1 with length window_len.
HedgeRatioSeries ols_hedge(const ReturnPair& pair, OlsMode mode,
                           const OlsConfig& config = {});

}  // namespace hedgekit
