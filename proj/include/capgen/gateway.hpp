// Copyright (C) 2026 The capgen authors
// SPDX-License-Identifier: Apache-2.0
//
// Uniform access to chat-completion-style backends: content-addressed
// response cache, bounded in-flight parallelism per backend, token-bucket
// throttling, and retry with exponential backoff. Safe for concurrent
// callers.
#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "capgen/base64.hpp"
#include "capgen/cache.hpp"
#include "capgen/clock.hpp"
#include "capgen/errors.hpp"
#include "capgen/rate_limiter.hpp"
#include "capgen/sha256.hpp"

namespace capgen::gateway {

// Stage-specific generation caps.
inline constexpr int kContextMaxTokens = 1024;
inline constexpr int kCaptionMaxTokens = 300;

struct Message {
    std::string role;
    std::string text;
    bool operator==(const Message&) const = default;
};

struct BackendRequest {
    std::string backend_id;
    std::string model_id;
    std::vector<Message> messages;
    std::string image_base64;  // empty means no attachment
    int max_tokens = kContextMaxTokens;
    double temperature = 0.0;
    std::string request_tag;  // pipeline stage name ("context", "caption", ...)
};

enum class FinishReason { complete, length, error };

inline std::string to_string(FinishReason r) {
    switch (r) {
        case FinishReason::complete: return "complete";
        case FinishReason::length: return "length";
        case FinishReason::error: return "error";
    }
    return "?";
}

inline FinishReason finish_reason_from(const std::string& s) {
    if (s == "length") return FinishReason::length;
    if (s == "error") return FinishReason::error;
    return FinishReason::complete;
}

struct TokenUsage {
    long prompt_tokens = 0;
    long completion_tokens = 0;
};

struct BackendResponse {
    std::string text;
    FinishReason finish_reason = FinishReason::complete;
    std::optional<TokenUsage> usage;
    bool cache_hit = false;
    std::string cache_key;
};

/// Retryable failure (network trouble, HTTP 5xx, rate-limit response).
class TransientBackendError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Non-retryable credential failure (HTTP 401/403).
class AuthError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Content-addressed request digest. Covers backend, model, canonicalized
/// messages, the image payload digest, the token cap and the temperature;
/// request_tag is a label, not content, and is excluded.
inline std::string cache_key(const BackendRequest& request) {
    constexpr char kUnitSep = '\x1f';
    constexpr char kRecordSep = '\x1e';
    std::string canonical;
    canonical += request.backend_id;
    canonical += kUnitSep;
    canonical += request.model_id;
    canonical += kUnitSep;
    for (std::size_t i = 0; i < request.messages.size(); ++i) {
        if (i) canonical += kRecordSep;
        canonical += request.messages[i].role;
        canonical += '\n';
        canonical += request.messages[i].text;
    }
    canonical += kUnitSep;
    if (!request.image_base64.empty()) {
        auto raw = imaging::decode_base64(request.image_base64);
        canonical += sha256_hex(
            std::string_view(reinterpret_cast<const char*>(raw.data()), raw.size()));
    }
    canonical += kUnitSep;
    canonical += std::to_string(request.max_tokens);
    canonical += kUnitSep;
    char temp[32];
    std::snprintf(temp, sizeof temp, "%.9g", request.temperature);
    canonical += temp;
    return sha256_hex(canonical);
}

class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string id() const = 0;
    /// Performs the actual completion. Throws TransientBackendError for
    /// retryable failures and AuthError for credential problems.
    virtual BackendResponse complete_raw(const BackendRequest& request) = 0;
};

struct RetryPolicy {
    int attempts = 3;
    std::chrono::milliseconds backoff_base{1000};
    std::uint64_t jitter_seed = 0;
};

struct BackendLimits {
    double requests_per_second = 0;  // <= 0 means unlimited
    double burst = 4;
    int max_inflight = 4;
};

class Gateway {
public:
    struct Stats {
        long requests = 0;
        long cache_hits = 0;
        long backend_calls = 0;
    };

    Gateway(ContentCache cache, Clock& clock, RetryPolicy retry = {},
            BackendLimits default_limits = {}, AuditLog* audit = nullptr)
        : cache_(std::move(cache)),
          clock_(clock),
          retry_(retry),
          default_limits_(default_limits),
          audit_(audit),
          jitter_rng_(retry.jitter_seed) {}

    void add_backend(std::unique_ptr<Backend> backend,
                     std::optional<BackendLimits> limits = std::nullopt) {
        auto state = std::make_unique<BackendState>(limits.value_or(default_limits_), clock_);
        state->backend = std::move(backend);
        backends_[state->backend->id()] = std::move(state);
    }

    bool has_backend(const std::string& id) const { return backends_.count(id) > 0; }

    BackendResponse complete(const BackendRequest& request) {
        if (request.messages.empty())
            throw std::invalid_argument("gateway: request has no messages");
        if (request.max_tokens < 1)
            throw std::invalid_argument("gateway: max_tokens must be >= 1");

        requests_.fetch_add(1);
        const std::string key = cache_key(request);
        auto t0 = std::chrono::steady_clock::now();

        if (auto entry = cache_.get(key)) {
            cache_hits_.fetch_add(1);
            record_audit(request, key, true, t0);
            return response_from_entry(*entry, key);
        }

        auto it = backends_.find(request.backend_id);
        if (it == backends_.end())
            throw ConfigError("gateway: backend not configured: " + request.backend_id);
        BackendState& state = *it->second;

        BackendResponse response;
        {
            InflightGuard guard(state);
            state.limiter.acquire();
            response = call_with_retry(*state.backend, request);
        }
        if (response.finish_reason == FinishReason::complete && response.text.empty())
            throw BackendError("gateway: backend " + request.backend_id +
                               " returned empty text with finish_reason=complete");

        cache_.put(key, entry_from(request, response, key));
        record_audit(request, key, false, t0);
        response.cache_key = key;
        response.cache_hit = false;
        return response;
    }

    Stats stats() const {
        return {requests_.load(), cache_hits_.load(), backend_calls_.load()};
    }

    const ContentCache& cache() const { return cache_; }

private:
    struct BackendState {
        BackendState(BackendLimits lim, Clock& clock)
            : limits(lim), limiter(lim.requests_per_second, lim.burst, clock) {}
        std::unique_ptr<Backend> backend;
        BackendLimits limits;
        RateLimiter limiter;
        std::mutex mu;
        std::condition_variable cv;
        int inflight = 0;
    };

    // Bounds in-flight calls per backend.
    class InflightGuard {
    public:
        explicit InflightGuard(BackendState& state) : state_(state) {
            std::unique_lock lock(state_.mu);
            state_.cv.wait(lock, [&] { return state_.inflight < state_.limits.max_inflight; });
            ++state_.inflight;
        }
        ~InflightGuard() {
            {
                std::lock_guard lock(state_.mu);
                --state_.inflight;
            }
            state_.cv.notify_one();
        }

    private:
        BackendState& state_;
    };

    BackendResponse call_with_retry(Backend& backend, const BackendRequest& request) {
        std::vector<std::string> attempts;
        for (int attempt = 1;; ++attempt) {
            try {
                BackendResponse response = backend.complete_raw(request);
                backend_calls_.fetch_add(1);
                return response;
            } catch (const AuthError& e) {
                throw ConfigError("gateway: authentication failed for backend " + backend.id() +
                                  ": " + e.what());
            } catch (const TransientBackendError& e) {
                backend_calls_.fetch_add(1);
                attempts.push_back("attempt " + std::to_string(attempt) + ": " + e.what());
                if (attempt >= retry_.attempts)
                    throw BackendError("gateway: backend " + backend.id() + " failed after " +
                                           std::to_string(attempt) + " attempts",
                                       attempts);
                clock_.sleep_for(backoff_delay(attempt));
            }
        }
    }

    Clock::Duration backoff_delay(int attempt) {
        auto base = std::chrono::duration_cast<Clock::Duration>(retry_.backoff_base);
        long long scaled = base.count() << (attempt - 1);
        long long jitter = 0;
        if (base.count() > 0) {
            std::lock_guard lock(jitter_mu_);
            jitter = static_cast<long long>(jitter_rng_() % (base.count() / 2 + 1));
        }
        return Clock::Duration(scaled + jitter);
    }

    static nlohmann::json entry_from(const BackendRequest& request,
                                     const BackendResponse& response, const std::string& key) {
        nlohmann::json usage;
        if (response.usage)
            usage = {{"prompt_tokens", response.usage->prompt_tokens},
                     {"completion_tokens", response.usage->completion_tokens}};
        return {{"cache_key", key},
                {"request",
                 {{"backend_id", request.backend_id},
                  {"model_id", request.model_id},
                  {"request_tag", request.request_tag},
                  {"max_tokens", request.max_tokens},
                  {"temperature", request.temperature},
                  {"has_image", !request.image_base64.empty()}}},
                {"response",
                 {{"text", response.text},
                  {"finish_reason", to_string(response.finish_reason)},
                  {"usage", usage}}}};
    }

    static BackendResponse response_from_entry(const nlohmann::json& entry,
                                               const std::string& key) {
        BackendResponse response;
        const auto& r = entry.at("response");
        response.text = r.at("text").get<std::string>();
        response.finish_reason = finish_reason_from(r.at("finish_reason").get<std::string>());
        if (r.contains("usage") && r["usage"].is_object())
            response.usage = TokenUsage{r["usage"].value("prompt_tokens", 0L),
                                        r["usage"].value("completion_tokens", 0L)};
        response.cache_hit = true;
        response.cache_key = key;
        return response;
    }

    void record_audit(const BackendRequest& request, const std::string& key, bool hit,
                      std::chrono::steady_clock::time_point t0) {
        if (!audit_) return;
        double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              t0)
                        .count();
        audit_->record(request.request_tag, request.backend_id, key, hit, ms);
    }

    ContentCache cache_;
    Clock& clock_;
    RetryPolicy retry_;
    BackendLimits default_limits_;
    AuditLog* audit_;
    std::map<std::string, std::unique_ptr<BackendState>> backends_;
    std::atomic<long> requests_{0};
    std::atomic<long> cache_hits_{0};
    std::atomic<long> backend_calls_{0};
    std::mutex jitter_mu_;
    std::mt19937_64 jitter_rng_;
};

}  // namespace capgen::gateway
