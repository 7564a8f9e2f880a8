#include "amak/amak.h"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

namespace {

const char* kCsv =
    "date,A,B\n"
    "2020-01-01,10,20\n"
    "2020-01-02,11,19\n"
    "2020-01-03,12,21\n"
    "2020-01-06,11,22\n";

void collect(const char* line, void* user) { static_cast<std::vector<std::string>*>(user)->push_back(line); }

}  // namespace

TEST_CASE("prices through the C interface") {
    amak_prices* p = nullptr;
    REQUIRE(amak_prices_parse_csv(kCsv, std::strlen(kCsv), &p) == AMAK_OK);
    CHECK(amak_prices_days(p) == 4);
    CHECK(amak_prices_assets(p) == 2);
    CHECK(std::string(amak_prices_asset_name(p, 1)) == "B");
    CHECK(std::string(amak_prices_date(p, 3)) == "2020-01-06");
    CHECK(amak_prices_price(p, 2, 1) == 21.0);
    CHECK(amak_prices_asset_name(p, 2) == nullptr);
    CHECK(std::strlen(amak_prices_fingerprint(p)) == 64);
    amak_prices_free(p);
}

TEST_CASE("errors carry a status and a message") {
    amak_prices* p = nullptr;
    const char* bad = "date,A,B\n2020-01-01,1,0\n";
    CHECK(amak_prices_parse_csv(bad, std::strlen(bad), &p) == AMAK_ERR_DATA);
    CHECK(std::string(amak_last_error()).find("non-positive") != std::string::npos);
    CHECK(p == nullptr);
    CHECK(amak_prices_load_csv("/nonexistent.csv", &p) == AMAK_ERR_IO);
    CHECK(amak_prices_load_csv(nullptr, &p) == AMAK_ERR_INVALID_ARGUMENT);

    amak_config* c = nullptr;
    REQUIRE(amak_config_new(&c) == AMAK_OK);
    CHECK(amak_config_set(c, "amak.nonsense", "1") == AMAK_ERR_INVALID_ARGUMENT);
    CHECK(amak_config_load_file(c, "/nonexistent.ini") == AMAK_ERR_IO);
    CHECK(amak_config_set(c, "backtest.seed", "5") == AMAK_OK);
    CHECK(std::string(amak_last_error()).empty());
    CHECK(std::string(amak_config_describe(c)).find("backtest.seed = 5") != std::string::npos);

    REQUIRE(amak_prices_parse_csv(kCsv, std::strlen(kCsv), &p) == AMAK_OK);
    amak_result* r = nullptr;
    CHECK(amak_backtest_run(p, c, &r) == AMAK_ERR_INSUFFICIENT_DATA);
    CHECK(r == nullptr);
    amak_prices_free(p);
    amak_config_free(c);

    // freeing null handles is harmless
    amak_prices_free(nullptr);
    amak_config_free(nullptr);
    amak_result_free(nullptr);
}

TEST_CASE("a backtest through the C interface") {
    amak_prices* p = nullptr;
    REQUIRE(amak_prices_generate("default", 1, 3, &p) == AMAK_OK);
    CHECK(amak_prices_days(p) == 600);
    amak_config* c = nullptr;
    REQUIRE(amak_config_new(&c) == AMAK_OK);
    REQUIRE(amak_config_set(c, "backtest.strategies", "amak,ubah,crp") == AMAK_OK);
    REQUIRE(amak_config_set(c, "amak.horizons", "10,20") == AMAK_OK);
    std::vector<std::string> log;
    amak_config_set_log_callback(c, collect, &log);

    amak_result* r = nullptr;
    REQUIRE(amak_backtest_run(p, c, &r) == AMAK_OK);
    CHECK_FALSE(log.empty());
    CHECK(log.front().rfind("amak day=20 horizon=10 event=init", 0) == 0);
    REQUIRE(amak_result_strategy_count(r) == 3);
    CHECK(std::string(amak_result_strategy_name(r, 0)) == "amak");
    CHECK(amak_result_first_day(r) == 21);
    CHECK(amak_result_last_day(r) == 599);
    CHECK(amak_result_assets(r) == 5);

    for (size_t i = 0; i < 3; ++i) {
        amak_metrics m{};
        REQUIRE(amak_result_metrics(r, i, &m) == AMAK_OK);
        size_t len = 0;
        const double* traj = amak_result_trajectory(r, i, &len);
        REQUIRE(len == 580);
        CHECK(traj[0] == 1.0);
        CHECK(traj[len - 1] == m.terminal_wealth);
        CHECK(m.asr == doctest::Approx((m.apy - 0.04) / std::sqrt(252.0)));

        double w = 1.0;
        std::vector<double> b(5);
        for (size_t k = 0; k + 1 < len; ++k) {
            REQUIRE(amak_result_portfolio(r, i, k, b.data()) == AMAK_OK);
            double g = 0;
            for (size_t j = 0; j < 5; ++j) {
                const double x = amak_prices_price(p, 21 + k, j) / amak_prices_price(p, 20 + k, j);
                g += b[j] * x;
            }
            w *= g;
        }
        CHECK(w == doctest::Approx(m.terminal_wealth).epsilon(1e-9));
    }
    amak_metrics m{};
    CHECK(amak_result_metrics(r, 9, &m) == AMAK_ERR_INVALID_ARGUMENT);
    std::vector<double> b(5);
    CHECK(amak_result_portfolio(r, 0, 9999, b.data()) == AMAK_ERR_INVALID_ARGUMENT);

    const std::string summary = amak_result_summary_json(r);
    CHECK(summary.find(amak_prices_fingerprint(p)) != std::string::npos);

    const auto dir = std::filesystem::temp_directory_path() / "amak_c_api_reports";
    std::filesystem::remove_all(dir);
    REQUIRE(amak_result_write_reports(r, dir.c_str()) == AMAK_OK);
    CHECK(std::filesystem::exists(dir / "summary.json"));
    CHECK(std::filesystem::exists(dir / "trajectory.csv"));
    CHECK(std::filesystem::exists(dir / "portfolios.csv"));
    std::filesystem::remove_all(dir);

    amak_result_free(r);
    amak_config_free(c);
    amak_prices_free(p);
}

TEST_CASE("version") { CHECK(std::strlen(amak_version()) > 0); }
