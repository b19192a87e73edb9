// Copyright (C) 2026 The capgen authors
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "capgen/mock_backend.hpp"
#include "capgen/translation.hpp"

using namespace capgen;
using corpus::LanguageTag;
using translation::TranslatorKind;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        static std::atomic<int> counter{0};
        path = std::filesystem::temp_directory_path() /
               ("capgen_tr_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
};

dialogue::Conversation small_conversation() {
    dialogue::Conversation conv;
    conv.short_qa.push_back({"What is it?", "A dish."});
    conv.detailed_description = "A small scene with a dish.";
    conv.complex_qa.push_back({"Why?", "Because soap."});
    conv.raw_text = dialogue::serialize_conversation(conv);
    conv.producer = "fusion";
    return conv;
}

}  // namespace

TEST_CASE("routing follows the per-language table", "[translation]") {
    CHECK(translation::route(LanguageTag::hi).translator == TranslatorKind::dedicated_mt);
    CHECK(translation::route(LanguageTag::bn).translator == TranslatorKind::dedicated_mt);
    CHECK(translation::route(LanguageTag::ml).translator == TranslatorKind::dedicated_mt);
    CHECK(translation::route(LanguageTag::ha).translator == TranslatorKind::llm);
    CHECK(translation::route_tag("hi").backend_id == "indictrans2");
    CHECK_THROWS_AS(translation::route_tag("xx"), ConfigError);
}

TEST_CASE("translate_conversation keeps segment order and labels", "[translation]") {
    translation::MockTranslator mock;
    auto conv = small_conversation();
    auto result = translation::translate_conversation(conv, LanguageTag::hi, mock);

    REQUIRE(result.segments.size() == 5);  // q, a, description, q, a
    CHECK(result.segments[0].first == "What is it?");
    CHECK(result.segments[0].second == "[hi] What is it?");
    CHECK(result.segments[2].first == "A small scene with a dish.");
    CHECK(result.segments[4].second == "[hi] Because soap.");
    CHECK(result.skipped.empty());

    // scaffolding labels re-inserted locally, in the target language
    CHECK(result.text.find("प्रश्न: [hi] What is it?") != std::string::npos);
    CHECK(result.text.find("उत्तर: [hi] A dish.") != std::string::npos);
    CHECK(result.text.find("[hi] A small scene with a dish.") != std::string::npos);
}

TEST_CASE("empty conversation translates to nothing with zero calls", "[translation]") {
    class CountingTranslator final : public translation::Translator {
    public:
        int calls = 0;
        std::string id() const override { return "counting"; }
        translation::TranslationResult translate(const std::vector<std::string>& segments,
                                                 LanguageTag target) override {
            ++calls;
            translation::MockTranslator inner;
            return inner.translate(segments, target);
        }
    };
    CountingTranslator translator;
    dialogue::Conversation empty;
    auto result = translation::translate_conversation(empty, LanguageTag::bn, translator);
    CHECK(result.empty());
    CHECK(result.text.empty());
    CHECK(translator.calls == 0);
}

TEST_CASE("empty segments are skipped and recorded", "[translation]") {
    translation::MockTranslator mock;
    dialogue::Conversation conv;
    conv.short_qa.push_back({"Q only?", "Yes."});
    // no description
    conv.raw_text = "x";
    auto result = translation::translate_conversation(conv, LanguageTag::ml, mock);
    CHECK(result.segments.size() == 2);
    REQUIRE(result.skipped.size() == 1);
    CHECK(result.skipped[0] == 2);  // the empty description slot
}

TEST_CASE("cached translator hits the cache on re-run", "[translation]") {
    TempDir tmp;
    translation::CachedTranslator cached(std::make_unique<translation::MockTranslator>(),
                                         gateway::ContentCache(tmp.path));
    auto conv = small_conversation();
    auto first = translation::translate_conversation(conv, LanguageTag::hi, cached);
    CHECK(cached.inner_calls() == 1);
    REQUIRE(first.cache_keys.size() == 1);

    auto second = translation::translate_conversation(conv, LanguageTag::hi, cached);
    CHECK(cached.inner_calls() == 1);  // cache hit, no new inner call
    CHECK(second.text == first.text);
    CHECK(second.cache_keys == first.cache_keys);

    // different language, different cache entry
    auto other = translation::translate_conversation(conv, LanguageTag::bn, cached);
    CHECK(cached.inner_calls() == 2);
    CHECK(other.cache_keys != first.cache_keys);
}

TEST_CASE("llm route translates per segment through the gateway", "[translation]") {
    TempDir tmp;
    SystemClock clock;
    gateway::Gateway gw(gateway::ContentCache(tmp.path), clock);
    gw.add_backend(std::make_unique<gateway::MockBackend>(7, "mock"));
    prompts::PromptSet prompts;
    translation::LlmTranslator llm(gw, {"mock", "m", 0.0}, prompts);

    auto conv = small_conversation();
    auto result = translation::translate_conversation(conv, LanguageTag::ha, llm);
    REQUIRE(result.segments.size() == 5);
    CHECK(result.cache_keys.size() == 5);
    CHECK(gw.stats().backend_calls == 5);
    CHECK(result.segments[0].second == "[ha] What is it?");
    CHECK(result.text.find("Tambaya: [ha] What is it?") != std::string::npos);

    SECTION("warm cache issues zero new calls") {
        auto again = translation::translate_conversation(conv, LanguageTag::ha, llm);
        CHECK(gw.stats().backend_calls == 5);
        CHECK(again.text == result.text);
    }
}

TEST_CASE("translated context json round-trip", "[translation]") {
    translation::MockTranslator mock;
    auto result = translation::translate_conversation(small_conversation(), LanguageTag::hi, mock);
    nlohmann::json j = result;
    auto back = j.get<translation::TranslatedContext>();
    CHECK(back.text == result.text);
    CHECK(back.segments == result.segments);
    CHECK(back.skipped == result.skipped);
}
