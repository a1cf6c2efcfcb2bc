#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hedgekit/bootstrap.hpp"
#include "hedgekit/csv.hpp"
#include "hedgekit/pipeline.hpp"
#include "hedgekit/stats.hpp"

namespace {

using hedgekit::RunConfig;

// Flags override config-file entries; the env var HEDGEKIT_SEED is the
// fallback of last resort for the seed.
void add_common_options(CLI::App& cmd, RunConfig& config, std::string& config_path) {
    cmd.add_option("--config", config_path, "flat key=value config file");
    cmd.add_option("--input", config.input, "input CSV (pair or contract format)");
    cmd.add_option("--spot-input", config.spot_input,
                   "spot contract CSV (with a contract-format --input)");
    cmd.add_option("--n-in", config.n_in, "in-sample length");
    cmd.add_option("--n-out", config.n_out, "out-of-sample length");
    cmd.add_option("--window", config.ols.window_len, "rolling OLS window length");
    cmd.add_option("--lpm-order", config.lpm_order, "LPM order n");
    cmd.add_option("--lpm-target", config.lpm_target, "LPM target return");
    cmd.add_option("--var-confidence", config.var_confidence, "VaR/CVaR confidence");
    cmd.add_option("--bootstrap", config.bootstrap_b, "bootstrap replicates B");
    cmd.add_option("--bootstrap-level", config.bootstrap_level, "bootstrap CI level");
    cmd.add_option("--seed", config.seed, "master seed");
    cmd.add_option("--threads", config.threads, "worker threads for bootstrap tests");
    cmd.add_option("--out", config.out_dir, "output directory");
    cmd.add_option("--period-label", config.period_label,
                   "free-text period tag carried into outputs");
    cmd.add_option("--models",
                   [&config](const std::vector<std::string>& vals) {
                       config.models.clear();
                       for (const auto& v : vals) {
                           std::stringstream ss(v);
                           std::string item;
                           while (std::getline(ss, item, ',')) {
                               if (!item.empty())
                                   config.models.push_back(hedgekit::model_from_name(item));
                           }
                       }
                       return !config.models.empty();
                   },
                   "comma-separated model list (none,naive,ols,sdvech,asdvech)");
    cmd.add_flag_callback("--raw-splice", [&config] {
        config.rollover = hedgekit::RolloverHandling::RawSplice;
    }, "keep returns that span a contract rollover");
    cmd.add_flag_callback("--ols-full-sample", [&config] {
        config.ols.full_sample = true;
    }, "single full-in-sample OLS beta instead of rolling");
    cmd.add_flag_callback("--joint-indicator", [&config] {
        config.indicator = hedgekit::IndicatorScope::Joint;
    }, "require both residuals negative for the asymmetry term");
}

RunConfig resolve_config(const CLI::App& cmd, const RunConfig& flag_values,
                         const std::string& config_path) {
    RunConfig config;
    if (const char* env = std::getenv("HEDGEKIT_SEED")) {
        config.seed = std::strtoull(env, nullptr, 10);
    }
    if (!config_path.empty()) {
        config = hedgekit::load_config_file(config_path, config);
    }

    // flags win over file entries
    auto flag_set = [&cmd](const std::string& name) {
        const auto* opt = cmd.get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
    };
    if (flag_set("--input")) config.input = flag_values.input;
    if (flag_set("--spot-input")) config.spot_input = flag_values.spot_input;
    if (flag_set("--n-in")) config.n_in = flag_values.n_in;
    if (flag_set("--n-out")) config.n_out = flag_values.n_out;
    if (flag_set("--window")) config.ols.window_len = flag_values.ols.window_len;
    if (flag_set("--lpm-order")) config.lpm_order = flag_values.lpm_order;
    if (flag_set("--lpm-target")) config.lpm_target = flag_values.lpm_target;
    if (flag_set("--var-confidence")) config.var_confidence = flag_values.var_confidence;
    if (flag_set("--bootstrap")) config.bootstrap_b = flag_values.bootstrap_b;
    if (flag_set("--bootstrap-level")) config.bootstrap_level = flag_values.bootstrap_level;
    if (flag_set("--seed")) config.seed = flag_values.seed;
    if (flag_set("--threads")) config.threads = flag_values.threads;
    if (flag_set("--out")) config.out_dir = flag_values.out_dir;
    if (flag_set("--period-label")) config.period_label = flag_values.period_label;
    if (flag_set("--models")) config.models = flag_values.models;
    if (flag_set("--raw-splice")) config.rollover = flag_values.rollover;
    if (flag_set("--ols-full-sample")) config.ols.full_sample = true;
    if (flag_set("--joint-indicator")) config.indicator = flag_values.indicator;
    return config;
}

int dispatch(const std::string& stage, const RunConfig& config) {
    using namespace hedgekit;
    try {
        if (stage == "run") {
            const RunManifest manifest = run_pipeline(config);
            std::cout << "wrote " << config.out_dir.string() << " ("
                      << manifest.effectiveness_rows << " effectiveness rows, "
                      << csv::format_double(manifest.elapsed_seconds) << "s)\n";
        } else if (stage == "ingest") {
            stage_ingest(config);
        } else if (stage == "stats") {
            stage_stats(config);
        } else if (stage == "fit") {
            stage_fit(config);
        } else if (stage == "evaluate") {
            stage_evaluate(config);
        } else if (stage == "report") {
            stage_report(config);
        }
        return ExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return ExitConfigError;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return ExitDataError;
    } catch (const csv::CsvError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return ExitDataError;
    } catch (const StatsError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return ExitDataError;
    } catch (const EstimationError& e) {
        std::cerr << "estimation error: " << e.what() << '\n';
        return ExitEstimationError;
    } catch (const ModelError& e) {
        std::cerr << "estimation error: " << e.what() << '\n';
        return ExitEstimationError;
    } catch (const BootstrapError& e) {
        std::cerr << "estimation error: " << e.what() << '\n';
        return ExitEstimationError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ExitFailure;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"futures hedge-ratio backtest engine"};
    app.require_subcommand(1);

    const char* stages[] = {"run", "ingest", "stats", "fit", "evaluate", "report"};
    const char* descriptions[] = {
        "full pipeline: ingest, stats, fit, evaluate, report",
        "build the continuous futures series and aligned returns",
        "summary statistics and diagnostics only",
        "estimate hedge-ratio series and GARCH parameters",
        "effectiveness tables and bootstrap tests from cached fit output",
        "re-render tables from cached stage outputs"};

    struct StageState {
        RunConfig flags;
        std::string config_path;
        CLI::App* cmd = nullptr;
    };
    std::vector<StageState> states(std::size(stages));
    for (std::size_t i = 0; i < std::size(stages); ++i) {
        states[i].cmd = app.add_subcommand(stages[i], descriptions[i]);
        add_common_options(*states[i].cmd, states[i].flags, states[i].config_path);
    }

    CLI11_PARSE(app, argc, argv);

    for (std::size_t i = 0; i < std::size(stages); ++i) {
        if (states[i].cmd->parsed()) {
            const RunConfig config =
                resolve_config(*states[i].cmd, states[i].flags, states[i].config_path);
            return dispatch(stages[i], config);
        }
    }
    return hedgekit::ExitFailure;
}
