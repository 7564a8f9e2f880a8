#include "amak/config.hpp"
#include "amak/error.hpp"
#include "amak/report.hpp"

#include <doctest.h>

#include <json.hpp>

#include <cmath>

using namespace amak;

TEST_CASE("settings file syntax") {
    const auto s = parse_settings(
        "# comment\n"
        "[backtest]\n"
        "strategies = amak, ubah\n"
        "; another comment\n"
        "seed = 7\n"
        "[amak]\n"
        "horizons = 10,20\n");
    REQUIRE(s.size() == 3);
    CHECK(s[0] == std::pair<std::string, std::string>{"backtest.strategies", "amak, ubah"});
    CHECK(s[2].first == "amak.horizons");
    CHECK_THROWS_AS(parse_settings("[backtest\nseed=1\n"), Error);
}

TEST_CASE("applying settings") {
    BacktestConfig cfg;
    apply_settings(cfg, parse_settings("[amak]\nmax_window = 3\nhorizons = 12,30\ntop_k = 2\n"
                                       "[backtest]\nseed = 9\nsharpe_mode = realized\n"
                                       "[eg]\neta = 0.1\n[crp]\nweights = 0.2,0.8\n"));
    REQUIRE(cfg.amak.horizons.size() == 2);
    // horizons are applied first, so per-horizon keys reach every new horizon
    for (const auto& h : cfg.amak.horizons) {
        CHECK(h.max_window == 3);
        CHECK(h.top_k == 2);
    }
    CHECK(cfg.amak.horizons[1].d == 30);
    CHECK(cfg.seed == 9);
    CHECK(cfg.sharpe == SharpeMode::realized_vol);
    CHECK(cfg.eg.eta == 0.1);
    REQUIRE(cfg.crp_weights.has_value());
    CHECK((*cfg.crp_weights)[1] == 0.8);
    CHECK(cfg.warmup(StrategyKind::amak) == 30);
}

TEST_CASE("bad settings are rejected") {
    BacktestConfig cfg;
    CHECK_THROWS_AS(apply_setting(cfg, "amak.unknown", "1"), Error);
    CHECK_THROWS_AS(apply_setting(cfg, "amak.top_k", "-1"), Error);
    CHECK_THROWS_AS(apply_setting(cfg, "amak.top_k", "two"), Error);
    CHECK_THROWS_AS(apply_setting(cfg, "amak.cluster_fallback", "maybe"), Error);
    CHECK_THROWS_AS(apply_setting(cfg, "backtest.strategies", "amak,bogus"), Error);
    CHECK_THROWS_AS(apply_setting(cfg, "eg.eta", "nan"), Error);
    try {
        apply_setting(cfg, "nope.key", "1");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::invalid_argument);
    }
}

TEST_CASE("describe round-trips") {
    BacktestConfig cfg;
    apply_setting(cfg, "amak.horizons", "15,40");
    apply_setting(cfg, "solver.gap_tolerance", "1e-9");
    apply_setting(cfg, "crp.weights", "0.25,0.75");
    const auto echo = describe(cfg);
    BacktestConfig again;
    apply_settings(again, echo);
    CHECK(describe(again) == echo);
}

TEST_CASE("synthetic spec files") {
    const auto spec = parse_synthetic_spec(
        "[synthetic]\nn_days = 40\nm_assets = 2\ndrift = 0.001, 0.002\nvolatility = 0.02\nseed = 5\n"
        "[regime.20]\ndrift = -0.003\n");
    CHECK(spec.n_days == 40);
    CHECK(spec.drift == std::vector<double>{0.001, 0.002});
    CHECK(spec.seed == 5);
    REQUIRE(spec.regimes.size() == 1);
    CHECK(spec.regimes[0].start_day == 20);
    CHECK(spec.regimes[0].drift == std::vector<double>{-0.003});
    CHECK(spec.regimes[0].volatility == std::vector<double>{0.02});
    CHECK_THROWS_AS(parse_synthetic_spec("[synthetic]\nn_days = 1\n"), Error);
    CHECK_THROWS_AS(parse_synthetic_spec("[synthetic]\nbogus = 1\n"), Error);
    CHECK(parse_synthetic_spec(
              [&] {
                  std::string text;
                  std::string section;
                  for (const auto& [k, v] : describe(spec)) {
                      const auto dot = k.rfind('.');
                      if (k.substr(0, dot) != section) {
                          section = k.substr(0, dot);
                          text += "[" + section + "]\n";
                      }
                      text += k.substr(dot + 1) + " = " + v + "\n";
                  }
                  return text;
              }())
              .drift == spec.drift);
}

TEST_CASE("report files") {
    SyntheticSpec spec;
    spec.n_days = 60;
    spec.m_assets = 2;
    const auto prices = generate_synthetic(spec);
    BacktestConfig cfg;
    cfg.strategies = {StrategyKind::ubah, StrategyKind::eg};
    const auto result = run_backtest(cfg, compute_relatives(prices));
    RunManifest man;
    man.seed = 42;
    man.data_sha256 = fingerprint(prices);
    man.config = describe(cfg);

    CHECK(man.data_sha256.size() == 64);
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

    const auto j = nlohmann::json::parse(summary_json(result, man));
    CHECK(j["manifest"]["seed"] == 42);
    CHECK(j["manifest"]["data_sha256"] == man.data_sha256);
    CHECK(j["strategies"].size() == 2);
    for (const auto& [name, block] : j["strategies"].items()) {
        const double apy = block["apy"], asr = block["asr"];
        CHECK(std::abs(asr - (apy - 0.04) / std::sqrt(252.0)) < 1e-12);
        CHECK(block.contains("mdd"));
        CHECK(block.contains("terminal_wealth"));
    }

    const auto traj = trajectory_csv(result, man);
    CHECK(traj.rfind("# seed=42 data_sha256=" + man.data_sha256, 0) == 0);
    CHECK(traj.find("day,ubah,eg\n") != std::string::npos);
    const auto ports = portfolios_csv(result, man, prices.asset_names());
    CHECK(ports.find("day,strategy,A1,A2\n") != std::string::npos);
    CHECK(ports.find("\n1,ubah,0.5,0.5\n") != std::string::npos);
}
