// Command-line front end. Talks to the library only through amak.h.

#include "amak/amak.h"

#include <CLI11.hpp>

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

int report_failure(amak_status status, const std::string& context) {
    std::fprintf(stderr, "error: %s: %s\n", context.c_str(), amak_last_error());
    return status == AMAK_ERR_INVALID_ARGUMENT ? kExitUsage : kExitFailure;
}

// An unusable spec file is a data problem, not a usage problem.
int data_failure(const std::string& context) {
    std::fprintf(stderr, "error: %s: %s\n", context.c_str(), amak_last_error());
    return kExitFailure;
}

struct Handles {
    amak_prices* prices = nullptr;
    amak_config* config = nullptr;
    amak_result* result = nullptr;
    ~Handles() {
        amak_result_free(result);
        amak_config_free(config);
        amak_prices_free(prices);
    }
};

void print_log_line(const char* line, void*) { std::fprintf(stderr, "%s\n", line); }

struct BacktestArgs {
    std::string data;
    std::string synthetic;
    std::string config;
    std::string out = "out";
    std::string strategies;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> overrides;
    bool verbose = false;
    bool quiet = false;
};

int run_backtest(const BacktestArgs& args) {
    Handles h;
    amak_status st = AMAK_OK;
    if (!args.data.empty()) {
        st = amak_prices_load_csv(args.data.c_str(), &h.prices);
        if (st != AMAK_OK) return report_failure(st, "loading " + args.data);
    } else {
        const bool seeded = args.seed.has_value();
        st = amak_prices_generate(args.synthetic.c_str(), seeded, seeded ? *args.seed : 0, &h.prices);
        if (st != AMAK_OK) return data_failure("generating synthetic data");
    }

    if ((st = amak_config_new(&h.config)) != AMAK_OK) return report_failure(st, "config");
    if (!args.config.empty() && (st = amak_config_load_file(h.config, args.config.c_str())) != AMAK_OK)
        return report_failure(st, "config " + args.config);
    if (!args.strategies.empty() &&
        (st = amak_config_set(h.config, "backtest.strategies", args.strategies.c_str())) != AMAK_OK)
        return report_failure(st, "--strategies");
    if (args.seed && (st = amak_config_set(h.config, "backtest.seed", std::to_string(*args.seed).c_str())) != AMAK_OK)
        return report_failure(st, "--seed");
    for (const auto& kv : args.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
            return kExitUsage;
        }
        const auto key = kv.substr(0, eq);
        const auto value = kv.substr(eq + 1);
        if ((st = amak_config_set(h.config, key.c_str(), value.c_str())) != AMAK_OK)
            return report_failure(st, "--set " + kv);
    }
    if (args.verbose) {
        amak_config_set_log_callback(h.config, print_log_line, nullptr);
        std::fprintf(stderr, "data: %zu days x %zu assets, sha256=%s\n%s", amak_prices_days(h.prices),
                     amak_prices_assets(h.prices), amak_prices_fingerprint(h.prices),
                     amak_config_describe(h.config));
    }

    if ((st = amak_backtest_run(h.prices, h.config, &h.result)) != AMAK_OK) return report_failure(st, "backtest");
    if ((st = amak_result_write_reports(h.result, args.out.c_str())) != AMAK_OK)
        return report_failure(st, "writing reports to " + args.out);

    if (!args.quiet) {
        std::printf("evaluated days %zu..%zu\n", amak_result_first_day(h.result), amak_result_last_day(h.result));
        std::printf("%-12s %14s %10s %10s %10s\n", "strategy", "wealth", "MDD", "APY", "ASR");
        for (size_t i = 0; i < amak_result_strategy_count(h.result); ++i) {
            amak_metrics m{};
            amak_result_metrics(h.result, i, &m);
            std::printf("%-12s %14.6f %10.4f %10.4f %10.4f\n", amak_result_strategy_name(h.result, i),
                        m.terminal_wealth, m.mdd, m.apy, m.asr);
        }
        std::printf("reports written to %s\n", args.out.c_str());
    }
    return kExitOk;
}

int run_generate(const std::string& spec, const std::string& out, std::optional<std::uint64_t> seed) {
    Handles h;
    const auto st = amak_prices_generate(spec.c_str(), seed.has_value(), seed.value_or(0), &h.prices);
    if (st != AMAK_OK) return data_failure("generating synthetic data");
    if (const auto w = amak_prices_write_csv(h.prices, out.c_str()); w != AMAK_OK)
        return report_failure(w, "writing " + out);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online portfolio selection backtester"};
    app.set_version_flag("--version", amak_version());
    app.require_subcommand(1);

    BacktestArgs bt;
    auto* backtest = app.add_subcommand("backtest", "Run strategies over a price history and write reports");
    auto* data_opt = backtest->add_option("--data", bt.data, "Price CSV: date column then one column per asset");
    auto* synth_opt =
        backtest->add_option("--synthetic", bt.synthetic, "Synthetic spec file, or 'default'");
    data_opt->excludes(synth_opt);
    backtest->add_option("--config", bt.config, "Settings file")->check(CLI::ExistingFile);
    backtest->add_option("--out", bt.out, "Report directory")->capture_default_str();
    backtest->add_option("--strategies", bt.strategies, "Comma-separated list, e.g. amak,corn-k,ubah");
    backtest->add_option("--seed", bt.seed, "Seed for clustering and synthetic data");
    backtest->add_option("--set", bt.overrides, "Override one setting, e.g. amak.horizons=10,20");
    auto* verbose = backtest->add_flag("-v,--verbose", bt.verbose, "Print the config echo and event log to stderr");
    backtest->add_flag("-q,--quiet", bt.quiet, "Suppress the summary table")->excludes(verbose);

    std::string spec = "default";
    std::string gen_out;
    std::optional<std::uint64_t> gen_seed;
    auto* generate = app.add_subcommand("generate", "Write a synthetic price CSV");
    generate->add_option("--spec", spec, "Synthetic spec file, or 'default'")->capture_default_str();
    generate->add_option("--out", gen_out, "Output CSV path")->required();
    generate->add_option("--seed", gen_seed, "Override the spec's seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (backtest->parsed()) {
        if (bt.data.empty() && bt.synthetic.empty()) {
            std::fprintf(stderr, "error: backtest needs --data or --synthetic\n");
            return kExitUsage;
        }
        return run_backtest(bt);
    }
    return run_generate(spec, gen_out, gen_seed);
}
