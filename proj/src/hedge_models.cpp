#include "hedgekit/hedge_models.hpp"

#include <algorithm>
#include <cmath>

namespace hedgekit {

std::string model_name(ModelId id) {
    switch (id) {
        case ModelId::None: return "none";
        case ModelId::Naive: return "naive";
        case ModelId::Ols: return "ols";
        case ModelId::Sdvech: return "sdvech";
        case ModelId::Asdvech: return "asdvech";
    }
    return "unknown";
}

ModelId model_from_name(const std::string& name) {
    if (name == "none") return ModelId::None;
    if (name == "naive") return ModelId::Naive;
    if (name == "ols") return ModelId::Ols;
    if (name == "sdvech") return ModelId::Sdvech;
    if (name == "asdvech") return ModelId::Asdvech;
    throw ModelError("unknown model name: " + name);
}

HedgeRatioSeries constant_ratio(ModelId id, const std::vector<std::string>& dates) {
    if (id != ModelId::None && id != ModelId::Naive) {
        throw ModelError("constant_ratio: model is not a constant-ratio model");
    }
    HedgeRatioSeries out;
    out.model = id;
    out.dates = dates;
    out.beta.assign(dates.size(), id == ModelId::Naive ? 1.0 : 0.0);
    return out;
}

OlsFit ols_window_fit(const ReturnPair& pair, std::size_t begin, std::size_t end) {
    if (end > pair.size() || begin >= end) {
        throw ModelError("ols_window_fit: invalid window");
    }
    const std::size_t n = end - begin;
    if (n < 2) throw ModelError("ols_window_fit: window too short");

    double ms = 0.0, mf = 0.0;
    for (std::size_t t = begin; t < end; ++t) {
        ms += pair.r_s[t];
        mf += pair.r_f[t];
    }
    ms /= static_cast<double>(n);
    mf /= static_cast<double>(n);

    double cov = 0.0, var_f = 0.0;
    for (std::size_t t = begin; t < end; ++t) {
        cov += (pair.r_s[t] - ms) * (pair.r_f[t] - mf);
        var_f += (pair.r_f[t] - mf) * (pair.r_f[t] - mf);
    }
    if (var_f <= 0.0) {
        throw ModelError("ols_window_fit: zero futures variance in window");
    }

    OlsFit fit;
    fit.beta = cov / var_f;
    fit.alpha = ms - fit.beta * mf;
    fit.window_begin = begin;
    fit.window_end = end;
    if (!std::isfinite(fit.beta)) {
        throw ModelError("ols_window_fit: non-finite beta");
    }
    return fit;
}

HedgeRatioSeries ols_hedge(const ReturnPair& pair, OlsMode mode, const OlsConfig& config) {
    if (config.min_window < 2 || config.window_len < config.min_window) {
        throw ModelError("ols_hedge: invalid window configuration");
    }
    if (pair.n_in < config.window_len) {
        throw ModelError("ols_hedge: in-sample length " + std::to_string(pair.n_in) +
                         " below window length " + std::to_string(config.window_len));
    }

    HedgeRatioSeries out;
    out.model = ModelId::Ols;

    if (mode == OlsMode::InSample) {
        const OlsFit full = config.full_sample ? ols_window_fit(pair, 0, pair.n_in) : OlsFit{};
        const OlsFit warmup =
            config.full_sample ? OlsFit{} : ols_window_fit(pair, 0, config.min_window);
        for (std::size_t t = 0; t < pair.n_in; ++t) {
            double beta;
            if (config.full_sample) {
                beta = full.beta;
            } else if (t < config.min_window) {
                // Warm-up: first feasible window. The only in-sample stretch
                // where the window does not end at t-1.
                beta = warmup.beta;
            } else {
                const std::size_t begin = t > config.window_len ? t - config.window_len : 0;
                beta = ols_window_fit(pair, begin, t).beta;
            }
            out.dates.push_back(pair.dates[t]);
            out.beta.push_back(beta);
        }
        return out;
    }

    // Out-of-sample: windows always end at t-1.
    const OlsFit full = config.full_sample ? ols_window_fit(pair, 0, pair.n_in) : OlsFit{};
    for (std::size_t t = pair.n_in; t < pair.n_in + pair.n_out; ++t) {
        double beta;
        if (config.full_sample) {
            beta = full.beta;
        } else {
            beta = ols_window_fit(pair, t - config.window_len, t).beta;
        }
        out.dates.push_back(pair.dates[t]);
        out.beta.push_back(beta);
    }
    return out;
}

}  // namespace hedgekit
