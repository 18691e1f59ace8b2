#ifndef HIDDENEP_IO_RECORD_HPP
#define HIDDENEP_IO_RECORD_HPP

// Result records keyed by a hash of the full parameter set.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hiddenep/io/csv.hpp"

namespace hiddenep::io {

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Ordered key/value parameter set; the canonical text is what gets hashed.
class ParamSet {
public:
    void set(const std::string& key, const std::string& value) { kv_[key] = value; }
    void set(const std::string& key, double value) { kv_[key] = fmt(value); }
    void set(const std::string& key, int value) { kv_[key] = fmt(value); }
    void set(const std::string& key, std::size_t value) { kv_[key] = fmt(value); }
    void set(const std::string& key, const char* value) { kv_[key] = value; }

    std::string canonical() const {
        std::string out;
        for (const auto& [k, v] : kv_)
            out += k + "=" + v + "\n";
        return out;
    }

    std::string hash() const {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical())));
        return buf;
    }

    const std::map<std::string, std::string>& values() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
};

struct ResultRecord {
    std::string hash;
    std::string command;
    std::string created; // UTC, ISO 8601
    std::vector<std::string> payloads;
    int format_version = kCsvFormatVersion;
    std::map<std::string, std::string> params;

    nlohmann::json to_json() const {
        return {{"hash", hash},         {"command", command}, {"created", created},
                {"payloads", payloads}, {"format_version", format_version}, {"params", params}};
    }

    static ResultRecord from_json(const nlohmann::json& j) {
        ResultRecord r;
        r.hash = j.at("hash").get<std::string>();
        r.command = j.at("command").get<std::string>();
        r.created = j.at("created").get<std::string>();
        r.payloads = j.at("payloads").get<std::vector<std::string>>();
        r.format_version = j.at("format_version").get<int>();
        r.params = j.at("params").get<std::map<std::string, std::string>>();
        return r;
    }
};

inline std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// <root>/<hash>/record.json plus the payload files. A record is written last,
// so an interrupted store leaves no record and the next run recomputes.
class ResultCache {
public:
    explicit ResultCache(std::filesystem::path root) : root_(std::move(root)) {}

    std::optional<ResultRecord> lookup(const std::string& hash) const {
        const auto rec = root_ / hash / "record.json";
        if (!std::filesystem::exists(rec))
            return std::nullopt;
        try {
            auto r = ResultRecord::from_json(nlohmann::json::parse(read_file(rec)));
            if (r.format_version != kCsvFormatVersion || r.hash != hash)
                return std::nullopt;
            for (const auto& p : r.payloads)
                if (!std::filesystem::exists(root_ / hash / p))
                    return std::nullopt;
            return r;
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }

    std::string payload(const ResultRecord& r, const std::string& name) const {
        return read_file(root_ / r.hash / name);
    }

    void store(const ResultRecord& r, const std::map<std::string, std::string>& payloads) const {
        for (const auto& [name, content] : payloads)
            write_atomic(root_ / r.hash / name, content);
        write_atomic(root_ / r.hash / "record.json", r.to_json().dump(2) + "\n");
    }

private:
    std::filesystem::path root_;
};

} // namespace hiddenep::io

#endif
