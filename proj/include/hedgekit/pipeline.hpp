#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hedgekit/effectiveness.hpp"
#include "hedgekit/hedge_models.hpp"
#include "hedgekit/market_data.hpp"
#include "hedgekit/risk_metrics.hpp"
#include "hedgekit/vech.hpp"

namespace hedgekit {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exit codes reported by the CLI.
enum ExitCode : int {
    ExitOk = 0,
    ExitFailure = 1,
    ExitConfigError = 2,
    ExitDataError = 3,
    ExitEstimationError = 4,
};

struct RunConfig {
    // Either a pre-aligned pair file (date,spot,futures prices or
    // date,r_s,r_f returns) or a raw futures contract file plus a spot file,
    // both in date,contract,price,volume form.
    std::filesystem::path input;
    std::filesystem::path spot_input;  // only with a contract-format input

    RolloverHandling rollover = RolloverHandling::SkipBoundary;
    std::size_t n_in = 160;
    std::size_t n_out = 100;

    OlsConfig ols;
    double lpm_order = 3.0;
    double lpm_target = 0.0;
    double var_confidence = 0.99;

    std::size_t bootstrap_b = 100;
    double bootstrap_level = 0.99;
    std::uint64_t seed = 0;

    std::vector<ModelId> models = {ModelId::None, ModelId::Naive, ModelId::Ols,
                                   ModelId::Sdvech, ModelId::Asdvech};
    IndicatorScope indicator = IndicatorScope::Own;
    std::size_t threads = 1;
    std::string period_label;
    std::filesystem::path out_dir = "out";
};

// Flat key=value file applied on top of `base`; later CLI flags override
// file entries.
RunConfig load_config_file(const std::filesystem::path& path, RunConfig base = {});
void validate_config(const RunConfig& config);

struct ModelDiagnostics {
    ModelId model = ModelId::None;
    bool fitted = false;  // only GARCH models carry a fit
    bool converged = true;
    std::size_t iterations = 0;
    double nll = 0.0;
    double initial_nll = 0.0;
    std::size_t clamp_count = 0;
    VechParams params;
};

struct RunManifest {
    std::map<std::string, std::string> config_echo;
    std::string input_checksum;
    std::string spot_checksum;
    std::vector<ModelDiagnostics> diagnostics;
    std::string tool_version;
    double elapsed_seconds = 0.0;
    std::size_t effectiveness_rows = 0;
};

// Loads whichever input schema the config points at and applies the
// in/out split.
ReturnPair load_input(const RunConfig& config);

// Per-model hedge-ratio series for the in-sample and out-of-sample dates.
struct ModelSeries {
    std::map<ModelId, HedgeRatioSeries> in_sample;
    std::map<ModelId, HedgeRatioSeries> out_sample;
    std::vector<ModelDiagnostics> diagnostics;
};

ModelSeries estimate_models(const ReturnPair& pair, const RunConfig& config);

std::vector<MetricSpec> metric_set(const RunConfig& config);

// Full pipeline: ingest -> stats -> fit -> evaluate -> bootstrap -> report.
// Writes summary_stats.csv, ohr_series.csv, params.csv, metrics.csv,
// effectiveness.csv, best_models.csv, bootstrap.csv and manifest.json into
// config.out_dir. Partial outputs are removed on failure.
RunManifest run_pipeline(const RunConfig& config);

// Individual stages for debugging; later stages read earlier stages' files.
void stage_ingest(const RunConfig& config);   // writes pair.csv, returns.csv, continuous.csv
void stage_stats(const RunConfig& config);    // writes summary_stats.csv
void stage_fit(const RunConfig& config);      // writes ohr_series.csv, params.csv
void stage_evaluate(const RunConfig& config); // writes metrics/effectiveness/best/bootstrap
void stage_report(const RunConfig& config);   // renders cached outputs to stdout

extern const char* const kToolVersion;

}  // namespace hedgekit
