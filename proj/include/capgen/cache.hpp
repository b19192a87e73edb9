// Copyright (C) 2026 The capgen authors
// SPDX-License-Identifier: Apache-2.0
//
// Content-addressed JSON cache shared by the model gateway, the MT client,
// and the embedder. One file per key under {dir}/{first2}/{key}.json.
// Entries are immutable: a second put with the same key is a no-op.
// Writes go to a temp file in the target directory, then rename.
#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "capgen/errors.hpp"

namespace capgen::gateway {

/// JSON-lines call log: one line per request with stage, key, hit/miss and
/// latency. Append-only; the file is the cross-process evidence that a warm
/// re-run touched no backend.
class AuditLog {
public:
    AuditLog() = default;
    explicit AuditLog(std::filesystem::path path) : path_(std::move(path)) {}

    void record(const std::string& stage, const std::string& backend, const std::string& key,
                bool hit, double latency_ms) {
        if (path_.empty()) return;
        nlohmann::json line{{"ts_ms", std::chrono::duration_cast<std::chrono::milliseconds>(
                                          std::chrono::system_clock::now().time_since_epoch())
                                          .count()},
                            {"stage", stage},
                            {"backend", backend},
                            {"cache_key", key},
                            {"hit", hit},
                            {"latency_ms", latency_ms}};
        std::lock_guard lock(mu_);
        std::filesystem::create_directories(path_.parent_path().empty()
                                                ? std::filesystem::path(".")
                                                : path_.parent_path());
        std::ofstream out(path_, std::ios::app);
        out << line.dump() << '\n';
    }

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    std::mutex mu_;
};

class ContentCache {
public:
    ContentCache() = default;
    explicit ContentCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    bool enabled() const { return !dir_.empty(); }

    std::optional<nlohmann::json> get(const std::string& key) const {
        if (!enabled()) return std::nullopt;
        std::ifstream in(entry_path(key), std::ios::binary);
        if (!in) return std::nullopt;
        try {
            return nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception&) {
            return std::nullopt;  // corrupt entry: treat as a miss
        }
    }

    /// Stores the entry unless the key already exists.
    void put(const std::string& key, const nlohmann::json& value) {
        if (!enabled()) return;
        auto path = entry_path(key);
        std::error_code ec;
        if (std::filesystem::exists(path, ec)) return;
        std::filesystem::create_directories(path.parent_path());
        auto tmp = path;
        tmp += ".tmp" + std::to_string(tmp_counter_.fetch_add(1)) + "." +
               std::to_string(std::chrono::steady_clock::now().time_since_epoch().count());
        {
            std::ofstream out(tmp, std::ios::binary);
            out << value.dump(2) << '\n';
            if (!out) throw std::runtime_error("cache: write failed: " + tmp.string());
        }
        std::filesystem::rename(tmp, path, ec);
        if (ec) std::filesystem::remove(tmp, ec);  // lost the race; entry already present
    }

    std::filesystem::path entry_path(const std::string& key) const {
        return dir_ / key.substr(0, 2) / (key + ".json");
    }

    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    inline static std::atomic<unsigned> tmp_counter_{0};
};

}  // namespace capgen::gateway
