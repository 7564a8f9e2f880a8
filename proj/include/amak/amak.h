#ifndef AMAK_H
#define AMAK_H

/* C interface to the backtesting library. Every handle is opaque and owned
 * by the caller once returned; release it with the matching *_free call.
 * Functions report failure through amak_status and leave a message that
 * amak_last_error() returns for the calling thread. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define AMAK_API __declspec(dllexport)
#else
#define AMAK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum amak_status {
    AMAK_OK = 0,
    AMAK_ERR_INVALID_ARGUMENT = 1,
    AMAK_ERR_IO = 2,
    AMAK_ERR_DATA = 3,
    AMAK_ERR_INSUFFICIENT_DATA = 4,
    AMAK_ERR_INTERNAL = 5
} amak_status;

typedef struct amak_prices amak_prices;
typedef struct amak_config amak_config;
typedef struct amak_result amak_result;

typedef struct amak_metrics {
    double mdd;
    double apy;
    double asr;
    double terminal_wealth;
    size_t n_days;
    double years;
} amak_metrics;

typedef void (*amak_log_fn)(const char* line, void* user_data);

AMAK_API const char* amak_version(void);
/* Message of the most recent failure on this thread, "" if none. */
AMAK_API const char* amak_last_error(void);

/* ---- price data ---- */

AMAK_API amak_status amak_prices_load_csv(const char* path, amak_prices** out);
AMAK_API amak_status amak_prices_parse_csv(const char* text, size_t length, amak_prices** out);
/* spec_path NULL or "default" uses the built-in synthetic spec. When
 * override_seed is nonzero, `seed` replaces the spec's seed. */
AMAK_API amak_status amak_prices_generate(const char* spec_path, int override_seed, uint64_t seed,
                                          amak_prices** out);
/* Writes the CSV ingestion format, preceded by the provenance comment lines
 * recorded when the data was generated. */
AMAK_API amak_status amak_prices_write_csv(const amak_prices* prices, const char* path);
AMAK_API size_t amak_prices_days(const amak_prices* prices);
AMAK_API size_t amak_prices_assets(const amak_prices* prices);
AMAK_API const char* amak_prices_asset_name(const amak_prices* prices, size_t asset);
AMAK_API const char* amak_prices_date(const amak_prices* prices, size_t day);
AMAK_API double amak_prices_price(const amak_prices* prices, size_t day, size_t asset);
/* Hex SHA-256 of the data content. Owned by the handle. */
AMAK_API const char* amak_prices_fingerprint(const amak_prices* prices);
AMAK_API void amak_prices_free(amak_prices* prices);

/* ---- configuration ---- */

AMAK_API amak_status amak_config_new(amak_config** out);
AMAK_API amak_status amak_config_load_file(amak_config* config, const char* path);
/* Dotted key such as "amak.horizons" or "backtest.seed". */
AMAK_API amak_status amak_config_set(amak_config* config, const char* key, const char* value);
/* Lines of "key = value" for every effective setting. Owned by the handle
 * and valid until the next call on it. */
AMAK_API const char* amak_config_describe(amak_config* config);
/* Receives one diagnostic line at a time during amak_backtest_run. */
AMAK_API void amak_config_set_log_callback(amak_config* config, amak_log_fn fn, void* user_data);
AMAK_API void amak_config_free(amak_config* config);

/* ---- backtest ---- */

AMAK_API amak_status amak_backtest_run(const amak_prices* prices, const amak_config* config, amak_result** out);

AMAK_API size_t amak_result_strategy_count(const amak_result* result);
AMAK_API const char* amak_result_strategy_name(const amak_result* result, size_t strategy);
AMAK_API amak_status amak_result_metrics(const amak_result* result, size_t strategy, amak_metrics* out);
/* Wealth at the end of the warm-up followed by one value per evaluated day. */
AMAK_API const double* amak_result_trajectory(const amak_result* result, size_t strategy, size_t* length);
AMAK_API size_t amak_result_first_day(const amak_result* result);
AMAK_API size_t amak_result_last_day(const amak_result* result);
AMAK_API size_t amak_result_assets(const amak_result* result);
/* Copies the weights held on evaluated day `k` (0-based) into `weights`,
 * which must hold amak_result_assets() values. */
AMAK_API amak_status amak_result_portfolio(const amak_result* result, size_t strategy, size_t k, double* weights);
AMAK_API const char* amak_result_summary_json(const amak_result* result);
/* summary.json, trajectory.csv and portfolios.csv. */
AMAK_API amak_status amak_result_write_reports(const amak_result* result, const char* out_dir);
AMAK_API void amak_result_free(amak_result* result);

#ifdef __cplusplus
}
#endif

#endif
