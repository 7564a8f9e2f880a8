#include "amak/amak.h"

#include "amak/backtest.hpp"
#include "amak/config.hpp"
#include "amak/error.hpp"
#include "amak/report.hpp"

#include <algorithm>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

struct amak_prices {
    amak::PriceSeries series;
    std::string source;
    std::vector<std::string> comments;
    std::string fingerprint;
};

struct amak_config {
    amak::BacktestConfig config;
    amak_log_fn log = nullptr;
    void* log_user = nullptr;
    std::string description;
};

struct amak_result {
    amak::BacktestResult result;
    amak::RunManifest manifest;
    std::vector<std::string> asset_names;
    std::vector<std::string> names;
    std::string summary;
};

namespace {

thread_local std::string last_error;

amak_status set_error(amak_status status, std::string message) {
    last_error = std::move(message);
    return status;
}

template <class F>
amak_status guarded(F&& body) {
    try {
        last_error.clear();
        body();
        return AMAK_OK;
    } catch (const amak::Error& e) {
        return set_error(static_cast<amak_status>(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(AMAK_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(AMAK_ERR_INTERNAL, e.what());
    } catch (...) {
        return set_error(AMAK_ERR_INTERNAL, "unknown error");
    }
}

void require(const void* p, const char* what) {
    if (!p) amak::fail(amak::ErrorCode::invalid_argument, std::string(what) + " must not be null");
}

amak_prices* wrap(amak::PriceSeries series, std::string source, std::vector<std::string> comments) {
    auto fp = amak::fingerprint(series);
    return new amak_prices{std::move(series), std::move(source), std::move(comments), std::move(fp)};
}

std::string settings_text(const amak::Settings& settings) {
    std::string out;
    for (const auto& [k, v] : settings) out += k + " = " + v + "\n";
    return out;
}

}  // namespace

extern "C" {

const char* amak_version(void) {
    static const std::string v(amak::version());
    return v.c_str();
}

const char* amak_last_error(void) { return last_error.c_str(); }

amak_status amak_prices_load_csv(const char* path, amak_prices** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = wrap(amak::load_prices(path), path, {});
    });
}

amak_status amak_prices_parse_csv(const char* text, size_t length, amak_prices** out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        *out = wrap(amak::parse_prices(std::string_view(text, length)), "<memory>", {});
    });
}

amak_status amak_prices_generate(const char* spec_path, int override_seed, uint64_t seed, amak_prices** out) {
    return guarded([&] {
        require(out, "out");
        const bool builtin = spec_path == nullptr || std::string_view(spec_path) == "default";
        auto spec = builtin ? amak::SyntheticSpec{} : amak::load_synthetic_spec(spec_path);
        if (override_seed) spec.seed = seed;
        const auto spec_hash = amak::sha256_hex(settings_text(amak::describe(spec)));
        std::vector<std::string> comments{
            "generator=amak " + std::string(amak::version()),
            "seed=" + std::to_string(spec.seed),
            "spec_sha256=" + spec_hash,
        };
        *out = wrap(amak::generate_synthetic(spec), "synthetic:" + std::string(builtin ? "default" : spec_path),
                    std::move(comments));
    });
}

amak_status amak_prices_write_csv(const amak_prices* prices, const char* path) {
    return guarded([&] {
        require(prices, "prices");
        require(path, "path");
        amak::write_prices(prices->series, path, prices->comments);
    });
}

size_t amak_prices_days(const amak_prices* prices) { return prices ? prices->series.days() : 0; }
size_t amak_prices_assets(const amak_prices* prices) { return prices ? prices->series.assets() : 0; }

const char* amak_prices_asset_name(const amak_prices* prices, size_t asset) {
    if (!prices || asset >= prices->series.assets()) return nullptr;
    return prices->series.asset_names()[asset].c_str();
}

const char* amak_prices_date(const amak_prices* prices, size_t day) {
    if (!prices || day >= prices->series.days()) return nullptr;
    return prices->series.dates()[day].c_str();
}

double amak_prices_price(const amak_prices* prices, size_t day, size_t asset) {
    if (!prices || day >= prices->series.days() || asset >= prices->series.assets()) return 0.0;
    return prices->series.price(day, asset);
}

const char* amak_prices_fingerprint(const amak_prices* prices) {
    return prices ? prices->fingerprint.c_str() : nullptr;
}

void amak_prices_free(amak_prices* prices) { delete prices; }

amak_status amak_config_new(amak_config** out) {
    return guarded([&] {
        require(out, "out");
        *out = new amak_config{};
    });
}

amak_status amak_config_load_file(amak_config* config, const char* path) {
    return guarded([&] {
        require(config, "config");
        require(path, "path");
        // apply to a copy so a failing file leaves the config untouched
        auto next = config->config;
        amak::apply_settings(next, amak::load_settings(path));
        next.validate();
        config->config = std::move(next);
    });
}

amak_status amak_config_set(amak_config* config, const char* key, const char* value) {
    return guarded([&] {
        require(config, "config");
        require(key, "key");
        require(value, "value");
        auto next = config->config;
        amak::apply_setting(next, key, value);
        config->config = std::move(next);
    });
}

const char* amak_config_describe(amak_config* config) {
    if (!config) return nullptr;
    config->description = settings_text(amak::describe(config->config));
    return config->description.c_str();
}

void amak_config_set_log_callback(amak_config* config, amak_log_fn fn, void* user_data) {
    if (!config) return;
    config->log = fn;
    config->log_user = user_data;
}

void amak_config_free(amak_config* config) { delete config; }

amak_status amak_backtest_run(const amak_prices* prices, const amak_config* config, amak_result** out) {
    return guarded([&] {
        require(prices, "prices");
        require(config, "config");
        require(out, "out");
        amak::RunManifest manifest;
        manifest.started_at = amak::utc_timestamp();
        manifest.config = amak::describe(config->config);
        manifest.seed = config->config.seed;
        manifest.data_source = prices->source;
        manifest.data_sha256 = prices->fingerprint;

        amak::LogSink sink;
        if (config->log) {
            sink = [cb = config->log, user = config->log_user](std::string_view line) {
                const std::string copy(line);
                cb(copy.c_str(), user);
            };
        }
        auto result = amak::run_backtest(config->config, amak::compute_relatives(prices->series), sink);
        manifest.finished_at = amak::utc_timestamp();

        auto handle = std::make_unique<amak_result>();
        handle->result = std::move(result);
        handle->manifest = std::move(manifest);
        handle->asset_names = prices->series.asset_names();
        for (const auto& s : handle->result.strategies) handle->names.emplace_back(amak::to_string(s.kind));
        handle->summary = amak::summary_json(handle->result, handle->manifest);
        *out = handle.release();
    });
}

size_t amak_result_strategy_count(const amak_result* result) {
    return result ? result->result.strategies.size() : 0;
}

const char* amak_result_strategy_name(const amak_result* result, size_t strategy) {
    if (!result || strategy >= result->names.size()) return nullptr;
    return result->names[strategy].c_str();
}

amak_status amak_result_metrics(const amak_result* result, size_t strategy, amak_metrics* out) {
    return guarded([&] {
        require(result, "result");
        require(out, "out");
        if (strategy >= result->result.strategies.size())
            amak::fail(amak::ErrorCode::invalid_argument, "strategy index out of range");
        const auto& s = result->result.strategies[strategy];
        *out = amak_metrics{s.metrics.mdd, s.metrics.apy,     s.metrics.asr,
                            s.trajectory.terminal(), s.metrics.n_days, s.metrics.years};
    });
}

const double* amak_result_trajectory(const amak_result* result, size_t strategy, size_t* length) {
    if (!result || strategy >= result->result.strategies.size()) {
        if (length) *length = 0;
        return nullptr;
    }
    const auto& values = result->result.strategies[strategy].trajectory.values();
    if (length) *length = values.size();
    return values.data();
}

size_t amak_result_first_day(const amak_result* result) { return result ? result->result.first_day : 0; }
size_t amak_result_last_day(const amak_result* result) { return result ? result->result.last_day : 0; }
size_t amak_result_assets(const amak_result* result) { return result ? result->asset_names.size() : 0; }

amak_status amak_result_portfolio(const amak_result* result, size_t strategy, size_t k, double* weights) {
    return guarded([&] {
        require(result, "result");
        require(weights, "weights");
        if (strategy >= result->result.strategies.size())
            amak::fail(amak::ErrorCode::invalid_argument, "strategy index out of range");
        const auto& ports = result->result.strategies[strategy].portfolios;
        if (k >= ports.size()) amak::fail(amak::ErrorCode::invalid_argument, "day index out of range");
        const auto& w = ports[k].weights();
        std::copy(w.begin(), w.end(), weights);
    });
}

const char* amak_result_summary_json(const amak_result* result) {
    return result ? result->summary.c_str() : nullptr;
}

amak_status amak_result_write_reports(const amak_result* result, const char* out_dir) {
    return guarded([&] {
        require(result, "result");
        require(out_dir, "out_dir");
        amak::write_reports(result->result, result->manifest, result->asset_names, out_dir);
    });
}

void amak_result_free(amak_result* result) { delete result; }

}  // extern "C"
