#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cubicw/version.hpp"

namespace cwtool {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hash_hex(const std::string& s) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(s)));
    return buf;
}

inline std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Effective configuration echoed into every artifact; the hash covers the
/// command and all key=value pairs but never the timestamp.
struct Meta {
    std::string command;
    std::vector<std::pair<std::string, std::string>> config;

    void set(const std::string& k, const std::string& v) { config.emplace_back(k, v); }
    void set(const std::string& k, double v) { config.emplace_back(k, fmt(v)); }
    void set(const std::string& k, long v) { config.emplace_back(k, std::to_string(v)); }

    std::string canonical() const {
        std::string s = command;
        for (const auto& [k, v] : config) s += " " + k + "=" + v;
        return s;
    }
    std::string hash() const { return hash_hex(canonical()); }

    void write_csv_header(std::ostream& os) const {
        os << "# cubicw v" << cubicw::kVersion << "\n";
        os << "# command=" << command << "\n";
        os << "# config:";
        for (const auto& [k, v] : config) os << " " << k << "=" << v;
        os << "\n";
        os << "# config_hash=" << hash() << "\n";
        os << "# timestamp=" << timestamp_utc() << "\n";
    }

    nlohmann::json to_json() const {
        nlohmann::json cfg = nlohmann::json::object();
        for (const auto& [k, v] : config) cfg[k] = v;
        return {{"version", cubicw::kVersion},
                {"command", command},
                {"config", cfg},
                {"config_hash", hash()},
                {"timestamp", timestamp_utc()}};
    }
};

/// --out resolution: empty means stdout; relative paths land in
/// $CUBICW_OUTDIR when that is set.
inline std::filesystem::path resolve_out(const std::string& out) {
    std::filesystem::path p(out);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("CUBICW_OUTDIR"); dir && *dir) {
            p = std::filesystem::path(dir) / p;
        }
    }
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    return p;
}

/// Stream sink: file when a path is given, stdout otherwise.
class Sink {
  public:
    explicit Sink(const std::string& out) {
        if (!out.empty()) {
            const auto path = resolve_out(out);
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw std::runtime_error("cannot open output file: " + path.string());
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

  private:
    std::unique_ptr<std::ofstream> file_;
};

inline void write_json(const std::string& out, const nlohmann::json& j) {
    Sink sink(out);
    sink.stream() << j.dump(2) << "\n";
}

}  // namespace cwtool
