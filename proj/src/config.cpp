#include "amak/config.hpp"

#include "amak/error.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace amak {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
    fail(ErrorCode::invalid_argument, "setting '" + std::string(key) + "': '" + std::string(value) + "' is not " +
                                          std::string(expected));
}

std::size_t to_size(std::string_view key, std::string_view value) {
    value = trim(value);
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size() || value.empty())
        bad_value(key, value, "a non-negative integer");
    return v;
}

std::uint64_t to_u64(std::string_view key, std::string_view value) {
    value = trim(value);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size() || value.empty())
        bad_value(key, value, "a non-negative integer");
    return v;
}

double to_double(std::string_view key, std::string_view value) {
    value = trim(value);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size() || value.empty() || !std::isfinite(v))
        bad_value(key, value, "a finite number");
    return v;
}

bool to_bool(std::string_view key, std::string_view value) {
    value = trim(value);
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    bad_value(key, value, "a boolean");
}

std::vector<std::string_view> split_list(std::string_view value) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= value.size()) {
        auto comma = value.find(',', start);
        if (comma == std::string_view::npos) comma = value.size();
        auto item = trim(value.substr(start, comma - start));
        if (!item.empty()) out.push_back(item);
        start = comma + 1;
    }
    return out;
}

std::vector<double> to_doubles(std::string_view key, std::string_view value) {
    std::vector<double> out;
    for (auto item : split_list(value)) out.push_back(to_double(key, item));
    if (out.empty()) bad_value(key, value, "a comma-separated list of numbers");
    return out;
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", v[i]);
        if (i) out += ",";
        out += buf;
    }
    return out;
}

std::string num(double v) { return join({v}); }

// Horizon-wide AMA-K settings apply to every sub-agent.
template <typename F>
void for_each_horizon(BacktestConfig& config, F&& f) {
    for (auto& h : config.amak.horizons) f(h);
}

}  // namespace

Settings parse_settings(std::string_view text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in{std::string(text)};
    try {
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        fail(ErrorCode::invalid_argument, std::string("config: ") + e.message() + " at line " + std::to_string(e.line()));
    }
    Settings out;
    for (const auto& [name, node] : tree) {
        if (node.empty()) {
            out.emplace_back(name, node.data());
            continue;
        }
        for (const auto& [key, leaf] : node) out.emplace_back(name + "." + key, leaf.data());
    }
    return out;
}

Settings load_settings(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io, "cannot open config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_settings(buf.str());
}

void apply_setting(BacktestConfig& config, std::string_view key, std::string_view raw) {
    const auto value = trim(raw);
    if (key == "backtest.strategies") {
        config.strategies = parse_strategy_list(value);
    } else if (key == "backtest.seed") {
        config.seed = to_u64(key, value);
    } else if (key == "backtest.sharpe_mode") {
        config.sharpe = parse_sharpe_mode(value);
    } else if (key == "amak.horizons") {
        std::vector<SubAgentConfig> horizons;
        const auto base = config.amak.horizons.empty() ? SubAgentConfig{} : config.amak.horizons.front();
        for (auto item : split_list(value)) {
            auto h = base;
            h.d = to_size(key, item);
            horizons.push_back(h);
        }
        if (horizons.empty()) bad_value(key, value, "a list of horizon lengths");
        config.amak.horizons = std::move(horizons);
    } else if (key == "amak.max_window") {
        const auto v = to_size(key, value);
        for_each_horizon(config, [&](SubAgentConfig& h) { h.max_window = v; });
    } else if (key == "amak.thresholds") {
        const auto v = to_size(key, value);
        for_each_horizon(config, [&](SubAgentConfig& h) { h.thresholds = v; });
    } else if (key == "amak.top_k") {
        const auto v = to_size(key, value);
        for_each_horizon(config, [&](SubAgentConfig& h) { h.top_k = v; });
    } else if (key == "amak.cluster_fallback") {
        const auto v = to_bool(key, value);
        for_each_horizon(config, [&](SubAgentConfig& h) { h.cluster_fallback = v; });
    } else if (key == "amak.epsilon") {
        const auto v = to_double(key, value);
        for_each_horizon(config, [&](SubAgentConfig& h) { h.clustering.epsilon = v; });
    } else if (key == "amak.max_attempts") {
        const auto v = to_size(key, value);
        for_each_horizon(config, [&](SubAgentConfig& h) { h.clustering.max_attempts = v; });
    } else if (key == "amak.max_passes") {
        const auto v = to_size(key, value);
        for_each_horizon(config, [&](SubAgentConfig& h) { h.clustering.max_passes = v; });
    } else if (key == "amak.warmup") {
        config.amak_warmup = to_size(key, value);
    } else if (key == "amak.parallel") {
        config.amak.parallel = to_bool(key, value);
    } else if (key == "corn_k.warmup") {
        config.corn_k.warmup = to_size(key, value);
    } else if (key == "corn_k.max_window") {
        config.corn_k.max_window = to_size(key, value);
    } else if (key == "corn_k.thresholds") {
        config.corn_k.thresholds = to_size(key, value);
    } else if (key == "corn_k.top_k") {
        config.corn_k.top_k = to_size(key, value);
    } else if (key == "eg.eta") {
        config.eg.eta = to_double(key, value);
    } else if (key == "crp.weights") {
        if (value.empty() || value == "uniform")
            config.crp_weights.reset();
        else
            config.crp_weights = to_doubles(key, value);
    } else if (key == "solver.initial_step") {
        config.solver.initial_step = to_double(key, value);
    } else if (key == "solver.gap_tolerance") {
        config.solver.gap_tolerance = to_double(key, value);
    } else if (key == "solver.max_iterations") {
        config.solver.max_iterations = to_size(key, value);
    } else {
        fail(ErrorCode::invalid_argument, "unknown setting '" + std::string(key) + "'");
    }
}

void apply_settings(BacktestConfig& config, const Settings& settings) {
    // Horizons first so that per-horizon keys reach the final horizon list
    // regardless of their order in the file.
    for (const auto& [k, v] : settings)
        if (k == "amak.horizons") apply_setting(config, k, v);
    for (const auto& [k, v] : settings)
        if (k != "amak.horizons") apply_setting(config, k, v);
}

Settings describe(const BacktestConfig& config) {
    Settings s;
    std::string strategies;
    for (auto k : config.strategies) strategies += (strategies.empty() ? "" : ",") + std::string(to_string(k));
    s.emplace_back("backtest.strategies", strategies);
    s.emplace_back("backtest.seed", std::to_string(config.seed));
    s.emplace_back("backtest.sharpe_mode", std::string(to_string(config.sharpe)));

    std::string horizons;
    for (const auto& h : config.amak.horizons) horizons += (horizons.empty() ? "" : ",") + std::to_string(h.d);
    s.emplace_back("amak.horizons", horizons);
    if (!config.amak.horizons.empty()) {
        const auto& h = config.amak.horizons.front();
        s.emplace_back("amak.max_window", std::to_string(h.max_window));
        s.emplace_back("amak.thresholds", std::to_string(h.thresholds));
        s.emplace_back("amak.top_k", std::to_string(h.top_k));
        s.emplace_back("amak.cluster_fallback", h.cluster_fallback ? "true" : "false");
        s.emplace_back("amak.epsilon", num(h.clustering.epsilon));
        s.emplace_back("amak.max_attempts", std::to_string(h.clustering.max_attempts));
        s.emplace_back("amak.max_passes", std::to_string(h.clustering.max_passes));
    }
    s.emplace_back("amak.warmup", std::to_string(config.warmup(StrategyKind::amak)));
    s.emplace_back("amak.parallel", config.amak.parallel ? "true" : "false");
    s.emplace_back("corn_k.warmup", std::to_string(config.corn_k.warmup));
    s.emplace_back("corn_k.max_window", std::to_string(config.corn_k.max_window));
    s.emplace_back("corn_k.thresholds", std::to_string(config.corn_k.thresholds));
    s.emplace_back("corn_k.top_k", std::to_string(config.corn_k.top_k));
    s.emplace_back("eg.eta", num(config.eg.eta));
    s.emplace_back("crp.weights", config.crp_weights ? join(*config.crp_weights) : "uniform");
    s.emplace_back("solver.initial_step", num(config.solver.initial_step));
    s.emplace_back("solver.gap_tolerance", num(config.solver.gap_tolerance));
    s.emplace_back("solver.max_iterations", std::to_string(config.solver.max_iterations));
    return s;
}

SyntheticSpec parse_synthetic_spec(std::string_view text) {
    SyntheticSpec spec;
    for (const auto& [key, raw] : parse_settings(text)) {
        const auto value = trim(raw);
        if (key == "synthetic.n_days") spec.n_days = to_size(key, value);
        else if (key == "synthetic.m_assets") spec.m_assets = to_size(key, value);
        else if (key == "synthetic.drift") spec.drift = to_doubles(key, value);
        else if (key == "synthetic.volatility") spec.volatility = to_doubles(key, value);
        else if (key == "synthetic.seed") spec.seed = to_u64(key, value);
        else if (key == "synthetic.start_price") spec.start_price = to_double(key, value);
        else if (key == "synthetic.start_date") spec.start_date = std::string(value);
        else if (key.starts_with("regime.")) {
            const auto rest = std::string_view(key).substr(7);
            const auto dot = rest.find('.');
            if (dot == std::string_view::npos) fail(ErrorCode::invalid_argument, "malformed regime key '" + key + "'");
            const auto day = to_size(key, rest.substr(0, dot));
            const auto field = rest.substr(dot + 1);
            auto it = std::find_if(spec.regimes.begin(), spec.regimes.end(),
                                   [&](const Regime& r) { return r.start_day == day; });
            if (it == spec.regimes.end()) {
                spec.regimes.push_back(Regime{day, {}, {}});
                it = spec.regimes.end() - 1;
            }
            if (field == "drift") it->drift = to_doubles(key, value);
            else if (field == "volatility") it->volatility = to_doubles(key, value);
            else fail(ErrorCode::invalid_argument, "unknown regime setting '" + key + "'");
        } else {
            fail(ErrorCode::invalid_argument, "unknown synthetic setting '" + key + "'");
        }
    }
    std::sort(spec.regimes.begin(), spec.regimes.end(),
              [](const Regime& a, const Regime& b) { return a.start_day < b.start_day; });
    // A regime that names only one of the two keys inherits the other from the base.
    for (auto& r : spec.regimes) {
        if (r.drift.empty()) r.drift = spec.drift;
        if (r.volatility.empty()) r.volatility = spec.volatility;
    }
    spec.validate();
    return spec;
}

SyntheticSpec load_synthetic_spec(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::io, "cannot open synthetic spec '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_synthetic_spec(buf.str());
}

Settings describe(const SyntheticSpec& spec) {
    Settings s;
    s.emplace_back("synthetic.n_days", std::to_string(spec.n_days));
    s.emplace_back("synthetic.m_assets", std::to_string(spec.m_assets));
    s.emplace_back("synthetic.drift", join(spec.drift));
    s.emplace_back("synthetic.volatility", join(spec.volatility));
    s.emplace_back("synthetic.seed", std::to_string(spec.seed));
    s.emplace_back("synthetic.start_price", num(spec.start_price));
    s.emplace_back("synthetic.start_date", spec.start_date);
    for (const auto& r : spec.regimes) {
        const auto p = "regime." + std::to_string(r.start_day);
        s.emplace_back(p + ".drift", join(r.drift));
        s.emplace_back(p + ".volatility", join(r.volatility));
    }
    return s;
}

}  // namespace amak
