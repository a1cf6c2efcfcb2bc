#include "hedgekit/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hedgekit/bootstrap.hpp"
#include "hedgekit/csv.hpp"
#include "hedgekit/rng.hpp"
#include "hedgekit/stats.hpp"

namespace hedgekit {

const char* const kToolVersion = "hedgekit 0.1.0";

namespace {

namespace fs = std::filesystem;

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for " + key + ": '" + value + "'");
    }
}

std::size_t parse_count(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    if (v < 0.0 || v != std::floor(v)) {
        throw ConfigError("config: " + key + " must be a non-negative integer");
    }
    return static_cast<std::size_t>(v);
}

std::vector<ModelId> parse_models(const std::string& value) {
    std::vector<ModelId> models;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) models.push_back(model_from_name(item));
    }
    if (models.empty()) throw ConfigError("config: empty model list");
    return models;
}

void apply_entry(RunConfig& config, const std::string& key, const std::string& value) {
    if (key == "input") config.input = value;
    else if (key == "spot_input") config.spot_input = value;
    else if (key == "rollover") {
        if (value == "skip-boundary") config.rollover = RolloverHandling::SkipBoundary;
        else if (value == "raw-splice") config.rollover = RolloverHandling::RawSplice;
        else throw ConfigError("config: rollover must be skip-boundary or raw-splice");
    }
    else if (key == "n_in") config.n_in = parse_count(key, value);
    else if (key == "n_out") config.n_out = parse_count(key, value);
    else if (key == "window") config.ols.window_len = parse_count(key, value);
    else if (key == "min_window") config.ols.min_window = parse_count(key, value);
    else if (key == "ols_full_sample") config.ols.full_sample = value == "true" || value == "1";
    else if (key == "lpm_order") config.lpm_order = parse_double(key, value);
    else if (key == "lpm_target") config.lpm_target = parse_double(key, value);
    else if (key == "var_confidence") config.var_confidence = parse_double(key, value);
    else if (key == "bootstrap") config.bootstrap_b = parse_count(key, value);
    else if (key == "bootstrap_level") config.bootstrap_level = parse_double(key, value);
    else if (key == "seed") config.seed = static_cast<std::uint64_t>(parse_count(key, value));
    else if (key == "models") config.models = parse_models(value);
    else if (key == "indicator") {
        if (value == "own") config.indicator = IndicatorScope::Own;
        else if (value == "joint") config.indicator = IndicatorScope::Joint;
        else throw ConfigError("config: indicator must be own or joint");
    }
    else if (key == "threads") config.threads = std::max<std::size_t>(1, parse_count(key, value));
    else if (key == "period_label") config.period_label = value;
    else if (key == "out") config.out_dir = value;
    else throw ConfigError("config: unknown key '" + key + "'");
}

}  // namespace

RunConfig load_config_file(const fs::path& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    RunConfig config = std::move(base);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        std::string key = line.substr(0, eq == std::string::npos ? line.size() : eq);
        key.erase(0, key.find_first_not_of(" \t"));
        key.erase(key.find_last_not_of(" \t\r") + 1);
        if (key.empty()) continue;
        if (eq == std::string::npos) {
            throw ConfigError("config " + path.string() + ":" + std::to_string(lineno) +
                              ": expected key=value");
        }
        std::string value = line.substr(eq + 1);
        value.erase(0, value.find_first_not_of(" \t"));
        value.erase(value.find_last_not_of(" \t\r") + 1);
        apply_entry(config, key, value);
    }
    return config;
}

void validate_config(const RunConfig& config) {
    if (config.input.empty()) throw ConfigError("config: input file is required");
    if (!(config.var_confidence > 0.0 && config.var_confidence < 1.0)) {
        throw ConfigError("config: var_confidence must lie in (0, 1)");
    }
    if (!(config.bootstrap_level > 0.0 && config.bootstrap_level < 1.0)) {
        throw ConfigError("config: bootstrap_level must lie in (0, 1)");
    }
    if (config.bootstrap_b < 2) throw ConfigError("config: bootstrap needs B >= 2");
    if (config.lpm_order < 0.0) throw ConfigError("config: lpm_order must be >= 0");
    if (config.models.empty()) throw ConfigError("config: empty model list");
    if (config.ols.min_window < 2 || config.ols.window_len < config.ols.min_window) {
        throw ConfigError("config: window must be >= min_window >= 2");
    }
}

// ---------------------------------------------------------------------------
// Input loading
// ---------------------------------------------------------------------------

namespace {

std::vector<ContractBar> read_contract_file(const fs::path& path) {
    const auto table = csv::read_file(path);
    const int c_date = table.column("date");
    const int c_contract = table.column("contract");
    const int c_price = table.column("price");
    const int c_volume = table.column("volume");
    if (c_date < 0 || c_contract < 0 || c_price < 0 || c_volume < 0) {
        throw DataError(path.string() + ": expected header date,contract,price,volume");
    }
    std::vector<ContractBar> bars;
    bars.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        ContractBar bar;
        bar.date = row[c_date];
        bar.contract_id = row[c_contract];
        bar.price = parse_double("price", row[c_price]);
        bar.volume = static_cast<std::int64_t>(parse_count("volume", row[c_volume]));
        bars.push_back(std::move(bar));
    }
    return bars;
}

ReturnPair load_pair_table(const csv::Table& table, const std::string& origin) {
    if (table.has_columns({"date", "r_s", "r_f"})) {
        const int cd = table.column("date"), cs = table.column("r_s"), cf = table.column("r_f");
        ReturnPair pair;
        for (const auto& row : table.rows) {
            pair.dates.push_back(row[cd]);
            pair.r_s.push_back(parse_double("r_s", row[cs]));
            pair.r_f.push_back(parse_double("r_f", row[cf]));
        }
        pair.n_in = pair.size();
        return pair;
    }
    if (table.has_columns({"date", "spot", "futures"})) {
        const int cd = table.column("date"), cs = table.column("spot"),
                  cf = table.column("futures");
        std::vector<std::string> dates;
        std::vector<double> spot, fut;
        for (const auto& row : table.rows) {
            dates.push_back(row[cd]);
            spot.push_back(parse_double("spot", row[cs]));
            fut.push_back(parse_double("futures", row[cf]));
        }
        return returns_from_prices(dates, spot, fut);
    }
    throw DataError(origin + ": unrecognized schema (expected date,spot,futures or "
                    "date,r_s,r_f or date,contract,price,volume)");
}

ReturnPair load_pair_from_contracts(const RunConfig& config) {
    if (config.spot_input.empty()) {
        throw ConfigError("config: contract-format input requires spot_input");
    }
    const auto fut_series = build_continuous(read_contract_file(config.input));
    const auto spot_series = build_continuous(read_contract_file(config.spot_input));
    return align_returns(log_returns(spot_series, config.rollover),
                         log_returns(fut_series, config.rollover));
}

}  // namespace

ReturnPair load_input(const RunConfig& config) {
    const auto table = csv::read_file(config.input);
    ReturnPair pair;
    if (table.has_columns({"date", "contract", "price", "volume"})) {
        pair = load_pair_from_contracts(config);
    } else {
        pair = load_pair_table(table, config.input.string());
    }
    if (config.n_in + config.n_out > pair.size()) {
        throw ConfigError("config: n_in + n_out = " +
                          std::to_string(config.n_in + config.n_out) + " exceeds the " +
                          std::to_string(pair.size()) + " available observations");
    }
    split_sample(pair, config.n_in, config.n_out);
    return pair;
}

// ---------------------------------------------------------------------------
// Estimation
// ---------------------------------------------------------------------------

namespace {

HedgeRatioSeries slice_betas(const HedgeRatioSeries& full, ModelId model,
                             std::size_t begin, std::size_t end) {
    HedgeRatioSeries out;
    out.model = model;
    out.dates.assign(full.dates.begin() + begin, full.dates.begin() + end);
    out.beta.assign(full.beta.begin() + begin, full.beta.begin() + end);
    return out;
}

std::vector<std::string> sample_dates(const ReturnPair& pair, Sample sample) {
    const SampleView view = sample == Sample::In ? in_sample(pair) : out_of_sample(pair);
    return {pair.dates.begin() + view.begin, pair.dates.begin() + view.end};
}

}  // namespace

ModelSeries estimate_models(const ReturnPair& pair, const RunConfig& config) {
    ModelSeries out;
    const auto in_dates = sample_dates(pair, Sample::In);
    const auto out_dates = sample_dates(pair, Sample::Out);

    for (ModelId model : config.models) {
        ModelDiagnostics diag;
        diag.model = model;
        switch (model) {
            case ModelId::None:
            case ModelId::Naive:
                out.in_sample.emplace(model, constant_ratio(model, in_dates));
                out.out_sample.emplace(model, constant_ratio(model, out_dates));
                break;
            case ModelId::Ols:
                out.in_sample.emplace(model, ols_hedge(pair, OlsMode::InSample, config.ols));
                out.out_sample.emplace(model, ols_hedge(pair, OlsMode::OutOfSample, config.ols));
                break;
            case ModelId::Sdvech:
            case ModelId::Asdvech: {
                const bool asymmetric = model == ModelId::Asdvech;
                FitOptions fit_opts;
                fit_opts.indicator = config.indicator;
                const FitResult fit = fit_vech(pair, asymmetric, fit_opts);

                diag.fitted = true;
                diag.converged = fit.converged;
                diag.iterations = fit.iterations;
                diag.nll = fit.nll;
                diag.initial_nll = fit.initial_nll;
                diag.params = fit.params;

                // Parameters come from the in-sample window only; the filter
                // then runs forward through the full series.
                FilterOptions fopts;
                fopts.asymmetric = asymmetric;
                fopts.indicator = config.indicator;
                const std::span<const double> rs_in(pair.r_s.data(), pair.n_in);
                const std::span<const double> rf_in(pair.r_f.data(), pair.n_in);
                VechParams probe = fit.params;
                Cov2 init;
                {
                    MomentPath in_path = filter_moments(fit.params, rs_in, rf_in, fopts);
                    double n = static_cast<double>(in_path.size());
                    for (std::size_t t = 0; t < in_path.size(); ++t) {
                        init.h_s += in_path.eps_s[t] * in_path.eps_s[t];
                        init.h_f += in_path.eps_f[t] * in_path.eps_f[t];
                        init.h_sf += in_path.eps_s[t] * in_path.eps_f[t];
                    }
                    init.h_s /= n;
                    init.h_f /= n;
                    init.h_sf /= n;
                }
                fopts.init = init;
                const std::size_t total = pair.n_in + pair.n_out;
                const MomentPath path = filter_moments(
                    probe, std::span<const double>(pair.r_s.data(), total),
                    std::span<const double>(pair.r_f.data(), total), fopts);
                diag.clamp_count = path.clamp_count;

                std::vector<std::string> dates(pair.dates.begin(), pair.dates.begin() + total);
                const HedgeRatioSeries full = garch_hedge_ratios(path, dates, model);
                out.in_sample.emplace(model, slice_betas(full, model, 0, pair.n_in));
                out.out_sample.emplace(model, slice_betas(full, model, pair.n_in, total));
                break;
            }
        }
        out.diagnostics.push_back(diag);
    }
    return out;
}

std::vector<MetricSpec> metric_set(const RunConfig& config) {
    return {MetricSpec::variance(), MetricSpec::lpm(config.lpm_order, config.lpm_target),
            MetricSpec::var(config.var_confidence), MetricSpec::cvar(config.var_confidence)};
}

// ---------------------------------------------------------------------------
// Output writers
// ---------------------------------------------------------------------------

namespace {

class OutputTracker {
public:
    explicit OutputTracker(fs::path dir) : dir_(std::move(dir)) {
        fs::create_directories(dir_);
    }

    fs::path path(const std::string& name) {
        written_.push_back(dir_ / name);
        return written_.back();
    }

    void discard_all() {
        for (const auto& p : written_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }

private:
    fs::path dir_;
    std::vector<fs::path> written_;
};

std::string fnv1a_checksum(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "";
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (!in) break;
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return out;
}

std::string stat_fields(const SummaryStats& s) {
    std::ostringstream os;
    auto d = csv::format_double;
    os << s.n << ',' << d(s.mean) << ',' << d(s.min) << ',' << d(s.max) << ','
       << d(s.std_dev) << ',';
    if (s.shape_defined) {
        os << d(s.skewness) << ',' << d(s.excess_kurtosis) << ','
           << d(s.bera_jarque.statistic) << ',' << (s.bera_jarque.reject_1pct ? 1 : 0) << ','
           << (s.bera_jarque.reject_5pct ? 1 : 0) << ',' << d(s.lm_arch.statistic) << ','
           << (s.lm_arch.reject_1pct ? 1 : 0) << ',' << (s.lm_arch.reject_5pct ? 1 : 0) << ','
           << d(s.adf.statistic) << ',' << (s.adf.reject_1pct ? 1 : 0) << ','
           << (s.adf.reject_5pct ? 1 : 0);
    } else {
        os << "undefined,undefined,,,,,,,,,";
    }
    return os.str();
}

void write_summary_stats(OutputTracker& out, const ReturnPair& pair,
                         const RunConfig& config) {
    std::vector<std::string> lines;
    const struct { const char* name; const std::vector<double>* values; } series[] = {
        {"spot", &pair.r_s}, {"futures", &pair.r_f}};
    const struct { const char* name; SampleView view; } samples[] = {
        {"full", {0, pair.n_in + pair.n_out}},
        {"in", in_sample(pair)},
        {"out", out_of_sample(pair)}};
    for (const auto& sr : series) {
        for (const auto& sm : samples) {
            if (sm.view.size() < 30) continue;
            const std::span<const double> span(sr.values->data() + sm.view.begin,
                                               sm.view.size());
            lines.push_back(std::string(config.period_label) + ',' + sr.name + ',' +
                            sm.name + ',' + stat_fields(summary_stats(span)));
        }
    }
    csv::write_file(out.path("summary_stats.csv"),
                    "period,series,sample,n,mean,min,max,std_dev,skewness,"
                    "excess_kurtosis,bera_jarque,bj_reject_1pct,bj_reject_5pct,"
                    "lm_arch,lm_reject_1pct,lm_reject_5pct,adf,adf_reject_1pct,"
                    "adf_reject_5pct",
                    lines);
}

void write_ohr_series(OutputTracker& out, const ModelSeries& series) {
    std::vector<std::string> lines;
    for (const auto* block : {&series.in_sample, &series.out_sample}) {
        for (const auto& [model, hrs] : *block) {
            for (std::size_t t = 0; t < hrs.size(); ++t) {
                lines.push_back(hrs.dates[t] + ',' + model_name(model) + ',' +
                                csv::format_double(hrs.beta[t]));
            }
        }
    }
    csv::write_file(out.path("ohr_series.csv"), "date,model,beta", lines);
}

void write_params(OutputTracker& out, const ModelSeries& series) {
    std::vector<std::string> lines;
    for (const auto& diag : series.diagnostics) {
        if (!diag.fitted) continue;
        const std::string m = model_name(diag.model);
        auto d = csv::format_double;
        const std::pair<const char*, double> entries[] = {
            {"mu_s", diag.params.mu_s}, {"mu_f", diag.params.mu_f},
            {"c_s", diag.params.c_s},   {"c_f", diag.params.c_f},
            {"c_sf", diag.params.c_sf}, {"a_s", diag.params.a_s},
            {"a_f", diag.params.a_f},   {"a_sf", diag.params.a_sf},
            {"b_s", diag.params.b_s},   {"b_f", diag.params.b_f},
            {"b_sf", diag.params.b_sf}, {"d_s", diag.params.d_s},
            {"d_f", diag.params.d_f}};
        for (const auto& [name, value] : entries) {
            lines.push_back(m + ',' + name + ',' + d(value));
        }
        lines.push_back(m + ",nll," + d(diag.nll));
        lines.push_back(m + ",initial_nll," + d(diag.initial_nll));
        lines.push_back(m + ",iterations," + std::to_string(diag.iterations));
        lines.push_back(m + ",converged," + (diag.converged ? "1" : "0"));
        lines.push_back(m + ",clamped_steps," + std::to_string(diag.clamp_count));
    }
    csv::write_file(out.path("params.csv"), "model,param,value", lines);
}

std::string round2(double percent) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", percent);
    return buf;
}

void write_effectiveness(OutputTracker& out, const EffectivenessTable& table) {
    std::vector<std::string> metric_lines, he_lines;
    for (const auto& row : table.rows) {
        const std::string prefix = sample_name(row.sample) + ',' + side_name(row.side) +
                                   ',' + model_name(row.model) + ',' +
                                   metric_name(row.metric);
        metric_lines.push_back(prefix + ',' + csv::format_double(row.raw_value));
        he_lines.push_back(prefix + ',' + csv::format_double(row.raw_value) + ',' +
                           model_name(row.baseline_model) + ',' +
                           round2(100.0 * row.he_value));
    }
    csv::write_file(out.path("metrics.csv"), "sample,side,model,metric,value",
                    metric_lines);
    csv::write_file(out.path("effectiveness.csv"),
                    "sample,side,model,metric,raw,baseline_model,he_percent", he_lines);
}

void write_best_models(OutputTracker& out, const EffectivenessTable& table) {
    std::vector<std::string> lines;
    for (const auto& row : best_models(table)) {
        lines.push_back(sample_name(row.sample) + ',' + side_name(row.side) + ',' +
                        metric_name(row.metric) + ',' + model_name(row.model));
    }
    csv::write_file(out.path("best_models.csv"), "sample,side,metric,model", lines);
}

// One bootstrap comparison; seeds derive from a stable task code so results
// do not depend on scheduling.
struct BootstrapTask {
    enum Kind { ShortVsLong, ModelVsBest } kind;
    Sample sample;
    HedgeSide side;  // unused for ShortVsLong
    ModelId model;
    ModelId reference;  // best model for ModelVsBest
    std::size_t metric_index;
};

std::uint64_t task_stream(const BootstrapTask& task) {
    return static_cast<std::uint64_t>(task.kind) * 1000000 +
           static_cast<std::uint64_t>(task.sample) * 100000 +
           static_cast<std::uint64_t>(task.side) * 10000 +
           static_cast<std::uint64_t>(task.model) * 1000 +
           static_cast<std::uint64_t>(task.reference) * 10 + task.metric_index;
}

void write_bootstrap(OutputTracker& out, const ReturnPair& pair,
                     const ModelSeries& series, const EffectivenessTable& table,
                     const RunConfig& config) {
    const auto metrics = metric_set(config);
    const auto best = best_models(table);
    auto best_for = [&](Sample sample, HedgeSide side, MetricKind kind) {
        for (const auto& b : best) {
            if (b.sample == sample && b.side == side && b.metric == kind) return b.model;
        }
        throw ModelError("bootstrap: missing best-model cell");
    };

    // Payoff cache per (sample, side, model).
    std::map<std::tuple<int, int, ModelId>, std::vector<double>> payoff;
    for (Sample sample : {Sample::In, Sample::Out}) {
        if ((sample == Sample::In ? pair.n_in : pair.n_out) == 0) continue;
        const auto& betas = sample == Sample::In ? series.in_sample : series.out_sample;
        for (HedgeSide side : {HedgeSide::Short, HedgeSide::Long}) {
            for (const auto& [model, hrs] : betas) {
                payoff[{static_cast<int>(sample), static_cast<int>(side), model}] =
                    hedged_returns(pair, hrs, side, sample).returns;
            }
        }
    }

    std::vector<BootstrapTask> tasks;
    for (Sample sample : {Sample::In, Sample::Out}) {
        if ((sample == Sample::In ? pair.n_in : pair.n_out) == 0) continue;
        for (std::size_t mi = 0; mi < metrics.size(); ++mi) {
            for (ModelId model : config.models) {
                tasks.push_back({BootstrapTask::ShortVsLong, sample, HedgeSide::Short,
                                 model, model, mi});
            }
            for (HedgeSide side : {HedgeSide::Short, HedgeSide::Long}) {
                const ModelId ref = best_for(sample, side, metrics[mi].kind);
                for (ModelId model : config.models) {
                    if (model == ref) continue;
                    tasks.push_back({BootstrapTask::ModelVsBest, sample, side, model, ref, mi});
                }
            }
        }
    }

    std::vector<TestResult> results(tasks.size());
    auto run_task = [&](std::size_t i) {
        const BootstrapTask& task = tasks[i];
        BootstrapSpec spec;
        spec.replicates = config.bootstrap_b;
        spec.level = config.bootstrap_level;
        spec.paired = true;
        spec.master_seed = rng::derive_seed(config.seed, task_stream(task));
        const int s = static_cast<int>(task.sample);
        if (task.kind == BootstrapTask::ShortVsLong) {
            const auto& a = payoff.at({s, static_cast<int>(HedgeSide::Short), task.model});
            const auto& b = payoff.at({s, static_cast<int>(HedgeSide::Long), task.model});
            results[i] = difference_test(a, b, metrics[task.metric_index], spec);
        } else {
            const auto& a = payoff.at({s, static_cast<int>(task.side), task.model});
            const auto& b = payoff.at({s, static_cast<int>(task.side), task.reference});
            results[i] = difference_test(a, b, metrics[task.metric_index], spec);
        }
    };

    if (config.threads <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < config.threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < tasks.size();
                     i = next.fetch_add(1)) {
                    run_task(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    std::vector<std::string> lines;
    auto d = csv::format_double;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const BootstrapTask& task = tasks[i];
        const TestResult& r = results[i];
        const std::string comparison =
            task.kind == BootstrapTask::ShortVsLong ? "short_vs_long" : "model_vs_best";
        const std::string side_or_pair = task.kind == BootstrapTask::ShortVsLong
                                             ? "short_vs_long"
                                             : side_name(task.side);
        lines.push_back(comparison + ',' + sample_name(task.sample) + ',' + side_or_pair +
                        ',' + model_name(task.model) + ',' +
                        metric_name(metrics[task.metric_index].kind) + ',' +
                        d(r.point_diff) + ',' + d(r.t_stat) + ',' + d(r.ci.lo) + ',' +
                        d(r.ci.hi) + ',' + (r.significant ? "1" : "0"));
    }
    csv::write_file(out.path("bootstrap.csv"),
                    "comparison,sample,side_or_pair,model,metric,point_diff,t_stat,"
                    "ci_lo,ci_hi,significant",
                    lines);
}

std::map<std::string, std::string> config_echo(const RunConfig& c) {
    std::map<std::string, std::string> e;
    e["input"] = c.input.string();
    if (!c.spot_input.empty()) e["spot_input"] = c.spot_input.string();
    e["rollover"] =
        c.rollover == RolloverHandling::SkipBoundary ? "skip-boundary" : "raw-splice";
    e["n_in"] = std::to_string(c.n_in);
    e["n_out"] = std::to_string(c.n_out);
    e["window"] = std::to_string(c.ols.window_len);
    e["min_window"] = std::to_string(c.ols.min_window);
    e["ols_full_sample"] = c.ols.full_sample ? "true" : "false";
    e["lpm_order"] = csv::format_double(c.lpm_order);
    e["lpm_target"] = csv::format_double(c.lpm_target);
    e["var_confidence"] = csv::format_double(c.var_confidence);
    e["bootstrap"] = std::to_string(c.bootstrap_b);
    e["bootstrap_level"] = csv::format_double(c.bootstrap_level);
    e["seed"] = std::to_string(c.seed);
    std::string models;
    for (ModelId m : c.models) {
        if (!models.empty()) models += ',';
        models += model_name(m);
    }
    e["models"] = models;
    e["indicator"] = c.indicator == IndicatorScope::Own ? "own" : "joint";
    e["threads"] = std::to_string(c.threads);
    e["period_label"] = c.period_label;
    e["out"] = c.out_dir.string();
    return e;
}

void write_manifest(OutputTracker& out, const RunManifest& manifest) {
    nlohmann::json j;
    j["tool_version"] = manifest.tool_version;
    j["config"] = manifest.config_echo;
    j["input_checksum"] = manifest.input_checksum;
    if (!manifest.spot_checksum.empty()) j["spot_checksum"] = manifest.spot_checksum;
    j["elapsed_seconds"] = manifest.elapsed_seconds;
    j["effectiveness_rows"] = manifest.effectiveness_rows;
    j["models"] = nlohmann::json::array();
    for (const auto& diag : manifest.diagnostics) {
        nlohmann::json m;
        m["model"] = model_name(diag.model);
        m["fitted"] = diag.fitted;
        if (diag.fitted) {
            m["converged"] = diag.converged;
            m["iterations"] = diag.iterations;
            m["nll"] = diag.nll;
            m["initial_nll"] = diag.initial_nll;
            m["clamped_steps"] = diag.clamp_count;
            m["params"] = {{"mu_s", diag.params.mu_s}, {"mu_f", diag.params.mu_f},
                           {"c_s", diag.params.c_s},   {"c_f", diag.params.c_f},
                           {"c_sf", diag.params.c_sf}, {"a_s", diag.params.a_s},
                           {"a_f", diag.params.a_f},   {"a_sf", diag.params.a_sf},
                           {"b_s", diag.params.b_s},   {"b_f", diag.params.b_f},
                           {"b_sf", diag.params.b_sf}, {"d_s", diag.params.d_s},
                           {"d_f", diag.params.d_f}};
        }
        j["models"].push_back(m);
    }
    std::ofstream os(out.path("manifest.json"), std::ios::trunc);
    os << j.dump(2) << '\n';
}

}  // namespace

RunManifest run_pipeline(const RunConfig& config) {
    validate_config(config);
    const auto start = std::chrono::steady_clock::now();

    const ReturnPair pair = load_input(config);
    OutputTracker out(config.out_dir);
    try {
        RunManifest manifest;
        manifest.tool_version = kToolVersion;
        manifest.config_echo = config_echo(config);
        manifest.input_checksum = fnv1a_checksum(config.input);
        if (!config.spot_input.empty()) {
            manifest.spot_checksum = fnv1a_checksum(config.spot_input);
        }

        write_summary_stats(out, pair, config);

        const ModelSeries series = estimate_models(pair, config);
        manifest.diagnostics = series.diagnostics;
        write_ohr_series(out, series);
        write_params(out, series);

        const EffectivenessTable table =
            build_table(pair, series.in_sample, series.out_sample, metric_set(config));
        manifest.effectiveness_rows = table.rows.size();
        write_effectiveness(out, table);
        write_best_models(out, table);
        write_bootstrap(out, pair, series, table, config);

        manifest.elapsed_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_manifest(out, manifest);
        return manifest;
    } catch (...) {
        out.discard_all();
        throw;
    }
}

// ---------------------------------------------------------------------------
// Staged execution
// ---------------------------------------------------------------------------

void stage_ingest(const RunConfig& config) {
    validate_config(config);
    const auto table = csv::read_file(config.input);
    if (!table.has_columns({"date", "contract", "price", "volume"})) {
        throw DataError("ingest: input must be in date,contract,price,volume form");
    }
    const auto fut_series = build_continuous(read_contract_file(config.input));
    OutputTracker out(config.out_dir);
    try {
        std::vector<std::string> cont_lines;
        for (std::size_t t = 0; t < fut_series.size(); ++t) {
            cont_lines.push_back(fut_series.dates[t] + ',' +
                                 csv::format_double(fut_series.prices[t]) + ',' +
                                 fut_series.front_id[t] + ',' +
                                 (fut_series.rollover_flags[t] ? "1" : "0"));
        }
        csv::write_file(out.path("continuous.csv"), "date,price,contract,rollover",
                        cont_lines);

        const ReturnPair pair = load_pair_from_contracts(config);
        std::vector<std::string> ret_lines;
        for (std::size_t t = 0; t < pair.size(); ++t) {
            ret_lines.push_back(pair.dates[t] + ',' + csv::format_double(pair.r_s[t]) +
                                ',' + csv::format_double(pair.r_f[t]));
        }
        csv::write_file(out.path("returns.csv"), "date,r_s,r_f", ret_lines);
    } catch (...) {
        out.discard_all();
        throw;
    }
}

void stage_stats(const RunConfig& config) {
    validate_config(config);
    const ReturnPair pair = load_input(config);
    OutputTracker out(config.out_dir);
    try {
        write_summary_stats(out, pair, config);
    } catch (...) {
        out.discard_all();
        throw;
    }
}

void stage_fit(const RunConfig& config) {
    validate_config(config);
    const ReturnPair pair = load_input(config);
    OutputTracker out(config.out_dir);
    try {
        const ModelSeries series = estimate_models(pair, config);
        write_ohr_series(out, series);
        write_params(out, series);
    } catch (...) {
        out.discard_all();
        throw;
    }
}

void stage_evaluate(const RunConfig& config) {
    validate_config(config);
    const ReturnPair pair = load_input(config);

    const fs::path ohr_path = config.out_dir / "ohr_series.csv";
    if (!fs::exists(ohr_path)) {
        throw DataError("evaluate: missing upstream artifact " + ohr_path.string() +
                        " (run the fit stage first)");
    }
    const auto ohr = csv::read_file(ohr_path);
    if (!ohr.has_columns({"date", "model", "beta"})) {
        throw DataError("evaluate: " + ohr_path.string() + " has unexpected schema");
    }
    const int cd = ohr.column("date"), cm = ohr.column("model"), cb = ohr.column("beta");

    // Reassemble per-model series and split them by date position.
    std::map<std::string, std::size_t> date_index;
    for (std::size_t t = 0; t < pair.size(); ++t) date_index[pair.dates[t]] = t;

    ModelSeries series;
    for (const auto& row : ohr.rows) {
        const ModelId model = model_from_name(row[cm]);
        const auto it = date_index.find(row[cd]);
        if (it == date_index.end()) {
            throw DataError("evaluate: ohr date " + row[cd] + " not present in input");
        }
        auto& block = it->second < pair.n_in ? series.in_sample : series.out_sample;
        auto& hrs = block[model];
        hrs.model = model;
        hrs.dates.push_back(row[cd]);
        hrs.beta.push_back(parse_double("beta", row[cb]));
    }

    OutputTracker out(config.out_dir);
    try {
        const EffectivenessTable table =
            build_table(pair, series.in_sample, series.out_sample, metric_set(config));
        write_effectiveness(out, table);
        write_best_models(out, table);
        write_bootstrap(out, pair, series, table, config);
    } catch (...) {
        out.discard_all();
        throw;
    }
}

void stage_report(const RunConfig& config) {
    const char* needed[] = {"summary_stats.csv", "effectiveness.csv", "best_models.csv",
                            "bootstrap.csv"};
    for (const char* name : needed) {
        if (!fs::exists(config.out_dir / name)) {
            throw DataError("report: missing cached output " +
                            (config.out_dir / name).string());
        }
    }
    for (const char* name : needed) {
        const auto table = csv::read_file(config.out_dir / name);
        std::cout << "== " << name << " ==\n";
        for (std::size_t i = 0; i < table.header.size(); ++i) {
            std::cout << (i ? "\t" : "") << table.header[i];
        }
        std::cout << '\n';
        for (const auto& row : table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                std::cout << (i ? "\t" : "") << row[i];
            }
            std::cout << '\n';
        }
        std::cout << '\n';
    }
}

}  // namespace hedgekit
