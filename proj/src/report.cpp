#include "amak/report.hpp"

#include "amak/error.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#ifndef AMAK_VERSION
#define AMAK_VERSION "0.0.0"
#endif

namespace amak {

std::string_view version() { return AMAK_VERSION; }

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        fail(ErrorCode::internal, "SHA-256 digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

std::string fingerprint(const PriceSeries& series) {
    std::string buf;
    for (const auto& n : series.asset_names()) buf += n + '\x1f';
    buf += '\x1e';
    for (const auto& d : series.dates()) buf += d + '\x1f';
    buf += '\x1e';
    const auto& v = series.values();
    buf.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(double));
    return sha256_hex(buf);
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

namespace {

std::string g12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string provenance_comment(const RunManifest& m) {
    return "# seed=" + std::to_string(m.seed) + " data_sha256=" + m.data_sha256 + " version=" + m.version + "\n";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::io, "cannot write '" + path.string() + "'");
    out << text;
    if (!out) fail(ErrorCode::io, "write failed for '" + path.string() + "'");
}

}  // namespace

std::string summary_json(const BacktestResult& result, const RunManifest& manifest) {
    nlohmann::ordered_json j;
    auto& man = j["manifest"];
    man["version"] = manifest.version;
    man["seed"] = manifest.seed;
    man["data_source"] = manifest.data_source;
    man["data_sha256"] = manifest.data_sha256;
    man["started_at"] = manifest.started_at;
    man["finished_at"] = manifest.finished_at;
    auto& cfg = man["config"];
    cfg = nlohmann::ordered_json::object();
    for (const auto& [k, v] : manifest.config) cfg[k] = v;

    j["evaluation"] = {{"warmup_days", result.warmup},
                       {"first_day", result.first_day},
                       {"last_day", result.last_day},
                       {"days", result.evaluated_days()}};
    auto& strategies = j["strategies"];
    strategies = nlohmann::ordered_json::object();
    for (const auto& s : result.strategies) {
        strategies[std::string(to_string(s.kind))] = {
            {"mdd", s.metrics.mdd},
            {"apy", s.metrics.apy},
            {"asr", s.metrics.asr},
            {"terminal_wealth", s.trajectory.terminal()},
            {"n_days", s.metrics.n_days},
            {"years", s.metrics.years},
        };
    }
    return j.dump(2) + "\n";
}

std::string trajectory_csv(const BacktestResult& result, const RunManifest& manifest) {
    std::string out = provenance_comment(manifest);
    out += "day";
    for (const auto& s : result.strategies) out += "," + std::string(to_string(s.kind));
    out += "\n";
    const auto len = result.strategies.empty() ? 0 : result.strategies.front().trajectory.size();
    for (std::size_t k = 0; k < len; ++k) {
        out += std::to_string(result.warmup + k);
        for (const auto& s : result.strategies) out += "," + g12(s.trajectory[k]);
        out += "\n";
    }
    return out;
}

std::string portfolios_csv(const BacktestResult& result, const RunManifest& manifest,
                           const std::vector<std::string>& asset_names) {
    std::string out = provenance_comment(manifest);
    out += "day,strategy";
    for (const auto& n : asset_names) out += "," + n;
    out += "\n";
    const auto days = result.evaluated_days();
    for (std::size_t k = 0; k < days; ++k) {
        for (const auto& s : result.strategies) {
            out += std::to_string(result.first_day + k) + "," + std::string(to_string(s.kind));
            for (double w : s.portfolios[k].weights()) out += "," + g12(w);
            out += "\n";
        }
    }
    return out;
}

void write_reports(const BacktestResult& result, const RunManifest& manifest,
                   const std::vector<std::string>& asset_names, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) fail(ErrorCode::io, "cannot create output directory '" + out_dir.string() + "': " + ec.message());
    write_text(out_dir / "summary.json", summary_json(result, manifest));
    write_text(out_dir / "trajectory.csv", trajectory_csv(result, manifest));
    write_text(out_dir / "portfolios.csv", portfolios_csv(result, manifest, asset_names));
}

}  // namespace amak
