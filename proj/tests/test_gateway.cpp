// Copyright (C) 2026 The capgen authors
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <atomic>
#include <filesystem>
#include <thread>

#include "capgen/gateway.hpp"
#include "capgen/mock_backend.hpp"

using namespace capgen;
using gateway::BackendRequest;
using gateway::BackendResponse;

namespace {

BackendRequest basic_request(std::string text = "hello") {
    BackendRequest req;
    req.backend_id = "mock";
    req.model_id = "mock-model";
    req.messages = {{"user", std::move(text)}};
    req.max_tokens = 64;
    req.temperature = 0.0;
    req.request_tag = "misc";
    return req;
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("capgen_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    static std::atomic<int>& counter() {
        static std::atomic<int> c{0};
        return c;
    }
};

// Backend whose behavior is scripted per call; instrumented for
// concurrency and retry tests.
class FakeBackend final : public gateway::Backend {
public:
    explicit FakeBackend(std::string id = "fake") : id_(std::move(id)) {}
    std::string id() const override { return id_; }

    std::function<BackendResponse(const BackendRequest&, int attempt)> script;
    std::chrono::milliseconds delay{0};

    BackendResponse complete_raw(const BackendRequest& request) override {
        int concurrent = ++inflight_;
        max_inflight_seen_ = std::max(max_inflight_seen_.load(), concurrent);
        if (delay.count() > 0) std::this_thread::sleep_for(delay);
        int attempt = ++calls_;
        auto response = script ? script(request, attempt)
                               : BackendResponse{.text = "ok", .cache_key = ""};
        --inflight_;
        return response;
    }

    int calls() const { return calls_.load(); }
    int max_inflight_seen() const { return max_inflight_seen_.load(); }

private:
    std::string id_;
    std::atomic<int> inflight_{0};
    std::atomic<int> max_inflight_seen_{0};
    std::atomic<int> calls_{0};
};

}  // namespace

TEST_CASE("cache_key is deterministic and field-sensitive", "[gateway]") {
    auto req = basic_request();
    CHECK(gateway::cache_key(req) == gateway::cache_key(req));

    auto warm = req;
    warm.temperature = 0.7;
    CHECK(gateway::cache_key(warm) != gateway::cache_key(req));

    auto with_image = req;
    with_image.image_base64 = imaging::encode_base64(std::string_view("pixels"));
    CHECK(gateway::cache_key(with_image) != gateway::cache_key(req));

    auto other_model = req;
    other_model.model_id = "other";
    CHECK(gateway::cache_key(other_model) != gateway::cache_key(req));

    auto other_text = req;
    other_text.messages[0].text += "!";
    CHECK(gateway::cache_key(other_text) != gateway::cache_key(req));

    auto other_tokens = req;
    other_tokens.max_tokens += 1;
    CHECK(gateway::cache_key(other_tokens) != gateway::cache_key(req));
}

TEST_CASE("mock backend is a pure function of seed and request", "[gateway]") {
    auto req = basic_request();
    auto a = gateway::MockBackend::mock_complete(req, 7);
    auto b = gateway::MockBackend::mock_complete(req, 7);
    CHECK(a.text == b.text);
    auto c = gateway::MockBackend::mock_complete(req, 8);
    CHECK(a.text != c.text);
}

TEST_CASE("cache hit on the second identical call", "[gateway]") {
    TempDir tmp;
    SystemClock clock;
    gateway::Gateway gw(gateway::ContentCache(tmp.path), clock);
    gw.add_backend(std::make_unique<gateway::MockBackend>(7));

    auto req = basic_request();
    auto first = gw.complete(req);
    CHECK_FALSE(first.cache_hit);
    auto second = gw.complete(req);
    CHECK(second.cache_hit);
    CHECK(second.text == first.text);
    CHECK(second.cache_key == first.cache_key);
    auto stats = gw.stats();
    CHECK(stats.requests == 2);
    CHECK(stats.cache_hits == 1);
    CHECK(stats.backend_calls == 1);
}

TEST_CASE("cache entries are immutable", "[gateway]") {
    TempDir tmp;
    gateway::ContentCache cache(tmp.path);
    cache.put("aabbcc", nlohmann::json{{"v", 1}});
    cache.put("aabbcc", nlohmann::json{{"v", 2}});
    auto entry = cache.get("aabbcc");
    REQUIRE(entry.has_value());
    CHECK((*entry)["v"] == 1);
}

TEST_CASE("rate limiter delays over-budget calls without dropping", "[gateway]") {
    ManualClock clock;
    gateway::RateLimiter limiter(2.0, 1.0, clock);  // 2 rps, burst of 1

    for (int i = 0; i < 5; ++i) limiter.acquire();
    auto sleeps = clock.sleeps();
    // first call spends the burst token; each later call waits ~0.5 s
    REQUIRE(sleeps.size() >= 4);
    double total = 0;
    for (auto d : sleeps) total += std::chrono::duration<double>(d).count();
    CHECK(total == Catch::Approx(4 * 0.5).margin(0.05));
    CHECK(clock.now() >= Clock::Duration(std::chrono::milliseconds(1990)));
}

TEST_CASE("transient failures retry then surface an attempt log", "[gateway]") {
    TempDir tmp;
    ManualClock clock;  // backoff sleeps advance instantly
    gateway::RetryPolicy retry;
    retry.attempts = 3;
    retry.backoff_base = std::chrono::milliseconds(100);
    gateway::Gateway gw(gateway::ContentCache(tmp.path), clock, retry);

    auto backend = std::make_unique<FakeBackend>("flaky");
    auto* backend_ptr = backend.get();
    backend->script = [](const BackendRequest&, int) -> BackendResponse {
        throw gateway::TransientBackendError("HTTP 500");
    };
    gw.add_backend(std::move(backend));

    auto req = basic_request();
    req.backend_id = "flaky";
    try {
        gw.complete(req);
        FAIL("expected BackendError");
    } catch (const BackendError& e) {
        CHECK(backend_ptr->calls() == 3);
        REQUIRE(e.attempts().size() == 3);
        CHECK(e.attempts()[0].find("HTTP 500") != std::string::npos);
    }
    // two backoff sleeps happened (after attempts 1 and 2)
    CHECK(clock.sleeps().size() == 2);
    CHECK(clock.sleeps()[1] >= clock.sleeps()[0]);
}

TEST_CASE("recovery within the retry budget succeeds", "[gateway]") {
    TempDir tmp;
    ManualClock clock;
    gateway::Gateway gw(gateway::ContentCache(tmp.path), clock);
    auto backend = std::make_unique<FakeBackend>("recovering");
    backend->script = [](const BackendRequest&, int attempt) -> BackendResponse {
        if (attempt < 3) throw gateway::TransientBackendError("HTTP 429");
        return {.text = "recovered"};
    };
    gw.add_backend(std::move(backend));
    auto req = basic_request();
    req.backend_id = "recovering";
    CHECK(gw.complete(req).text == "recovered");
}

TEST_CASE("auth failures do not retry", "[gateway]") {
    TempDir tmp;
    ManualClock clock;
    gateway::Gateway gw(gateway::ContentCache(tmp.path), clock);
    auto backend = std::make_unique<FakeBackend>("locked");
    auto* ptr = backend.get();
    backend->script = [](const BackendRequest&, int) -> BackendResponse {
        throw gateway::AuthError("HTTP 401");
    };
    gw.add_backend(std::move(backend));
    auto req = basic_request();
    req.backend_id = "locked";
    CHECK_THROWS_AS(gw.complete(req), ConfigError);
    CHECK(ptr->calls() == 1);
}

TEST_CASE("unconfigured backend is a configuration error", "[gateway]") {
    TempDir tmp;
    SystemClock clock;
    gateway::Gateway gw(gateway::ContentCache(tmp.path), clock);
    auto req = basic_request();
    req.backend_id = "nope";
    CHECK_THROWS_AS(gw.complete(req), ConfigError);
    CHECK_THROWS_AS(gw.complete(BackendRequest{}), std::invalid_argument);
}

TEST_CASE("in-flight requests per backend stay bounded", "[gateway]") {
    TempDir tmp;
    SystemClock clock;
    gateway::BackendLimits limits;
    limits.max_inflight = 2;
    gateway::Gateway gw(gateway::ContentCache(tmp.path), clock, {}, limits);

    auto backend = std::make_unique<FakeBackend>("slow");
    auto* ptr = backend.get();
    ptr->delay = std::chrono::milliseconds(20);
    ptr->script = [](const BackendRequest& r, int) -> BackendResponse {
        return {.text = "done " + r.messages[0].text};
    };
    gw.add_backend(std::move(backend));

    std::vector<std::thread> threads;
    for (int i = 0; i < 8; ++i)
        threads.emplace_back([&gw, i] {
            auto req = basic_request("msg " + std::to_string(i));
            req.backend_id = "slow";
            gw.complete(req);
        });
    for (auto& t : threads) t.join();
    CHECK(ptr->calls() == 8);
    CHECK(ptr->max_inflight_seen() <= 2);
}

TEST_CASE("audit log records hits and misses", "[gateway]") {
    TempDir tmp;
    SystemClock clock;
    gateway::AuditLog audit(tmp.path / "audit.log");
    gateway::Gateway gw(gateway::ContentCache(tmp.path / "cache"), clock, {}, {}, &audit);
    gw.add_backend(std::make_unique<gateway::MockBackend>(7));

    auto req = basic_request();
    gw.complete(req);
    gw.complete(req);

    std::ifstream in(tmp.path / "audit.log");
    std::string line;
    std::vector<nlohmann::json> entries;
    while (std::getline(in, line)) entries.push_back(nlohmann::json::parse(line));
    REQUIRE(entries.size() == 2);
    CHECK(entries[0]["hit"] == false);
    CHECK(entries[1]["hit"] == true);
    CHECK(entries[0]["cache_key"] == entries[1]["cache_key"]);
}
