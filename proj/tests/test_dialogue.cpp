// Copyright (C) 2026 The capgen authors
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "capgen/dialogue.hpp"
#include "capgen/gateway.hpp"
#include "capgen/mock_backend.hpp"

using namespace capgen;
using dialogue::Conversation;
using dialogue::StageBinding;

namespace {

// The example conversation embedded in the context prompt, in the layout
// models are asked to imitate.
const char* kExampleConversation = R"(Response type 1: conversation

Question: What type of vehicle is featured in the image?

Answer: The image features a black sport utility vehicle (SUV).

Question: Where is the vehicle parked?

Answer: The vehicle is parked in an underground parking area, likely in a public garage.

Question: What are the people in the image doing?

Answer: The people are trying to fit all of their luggage into the SUV, likely preparing for a trip.

Response type 2: detailed description

The image shows an underground parking area with a black SUV. Three people are packing luggage into the vehicle, with one person on the left, one in the middle, and one on the right. Scattered around the SUV are two backpacks—one near the left rear wheel, another on the right—and two suitcases, one beside the car and another near the center of the lot. A bicycle is visible on the left. Other cars are parked nearby: one directly behind, one slightly to the left, and another to the right.

Response type 3: complex reasoning

Question: What challenges do these people face?

Answer: A group of people stands outside a black SUV in a parking area, surrounded by suitcases and backpacks. They face the challenge of fitting all their luggage into the vehicle, indicating they have a lot to pack. They need to arrange the luggage efficiently to ensure everything fits and consider the comfort of passengers and the driver's visibility during the trip.
)";

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        static std::atomic<int> counter{0};
        path = std::filesystem::temp_directory_path() /
               ("capgen_dlg_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
};

corpus::RegionRecord record_for(const std::string& caption) {
    corpus::RegionRecord rec;
    rec.image_id = "img1";
    rec.region = {1, 2, 3, 4, corpus::RegionOrigin::bottom_left};
    rec.english_caption = caption;
    rec.language = corpus::LanguageTag::hi;
    rec.split = corpus::SplitTag::train;
    return rec;
}

}  // namespace

TEST_CASE("context prompt renders the caption and the probe instruction", "[dialogue]") {
    prompts::PromptSet prompts;
    StageBinding stage{"gpt", "gpt-model", 0.0};
    auto request =
        dialogue::build_context_prompt("soap is in the dish", "aW1n", prompts, stage);
    const std::string& text = request.messages.at(0).text;

    CHECK(text.find("You must include a question-answer pair asking about the number of words "
                    "in the English caption") != std::string::npos);
    CHECK(text.find("soap is in the dish, [image attached]. Do not hallucinate!") !=
          std::string::npos);
    CHECK(request.max_tokens == 1024);
    CHECK(request.request_tag == "context");
    CHECK(request.image_base64 == "aW1n");
    CHECK(request.temperature == 0.0);

    // exactly one substitution of the caption slot, no leftover braces
    std::size_t first = text.find("soap is in the dish,");
    CHECK(text.find("soap is in the dish,", first + 1) == std::string::npos);
    CHECK(text.find("{english_caption}") == std::string::npos);
    CHECK(text.find("{image_link}") == std::string::npos);
    CHECK(text.find("{example_image_link}") == std::string::npos);
}

TEST_CASE("context prompt preserves literal braces in captions", "[dialogue]") {
    prompts::PromptSet prompts;
    StageBinding stage{"gpt", "m", 0.0};
    auto request = dialogue::build_context_prompt("a {strange} caption", "", prompts, stage);
    CHECK(request.messages[0].text.find("a {strange} caption, [no image]. Do not hallucinate!") !=
          std::string::npos);
    CHECK_THROWS_AS(dialogue::build_context_prompt("  ", "", prompts, stage),
                    std::invalid_argument);
}

TEST_CASE("parse_conversation handles the reference example", "[dialogue]") {
    auto conv = dialogue::parse_conversation(kExampleConversation, "gpt");
    CHECK(conv.producer == "gpt");
    REQUIRE(conv.short_qa.size() == 3);
    CHECK(conv.short_qa[0].question == "What type of vehicle is featured in the image?");
    CHECK(conv.short_qa[0].answer == "The image features a black sport utility vehicle (SUV).");
    CHECK(conv.detailed_description.rfind("The image shows an underground parking area", 0) == 0);
    REQUIRE(conv.complex_qa.size() == 1);
    CHECK(conv.complex_qa[0].question == "What challenges do these people face?");
    CHECK(conv.complete());
    CHECK(conv.raw_text == kExampleConversation);
}

TEST_CASE("parse_conversation is total on degraded input", "[dialogue]") {
    auto empty = dialogue::parse_conversation("", "x");
    CHECK_FALSE(empty.complete());
    CHECK(empty.short_qa.empty());
    CHECK(empty.detailed_description.empty());

    auto noise = dialogue::parse_conversation("no structure whatsoever", "x");
    CHECK_FALSE(noise.complete());
    CHECK(noise.raw_text == "no structure whatsoever");
}

TEST_CASE("parse_conversation tolerates reordered sections", "[dialogue]") {
    std::string reordered =
        "Response type 2: detailed description\nA small scene.\n"
        "Response type 1: conversation\nQuestion: One?\nAnswer: Yes.\n"
        "Response type 3: complex reasoning\nQuestion: Why?\nAnswer: Because.\n";
    auto conv = dialogue::parse_conversation(reordered, "x");
    REQUIRE(conv.short_qa.size() == 1);
    CHECK(conv.detailed_description == "A small scene.");
    REQUIRE(conv.complex_qa.size() == 1);
    CHECK(conv.complete());

    auto original = dialogue::parse_conversation(
        "Response type 1: conversation\nQuestion: One?\nAnswer: Yes.\n"
        "Response type 2: detailed description\nA small scene.\n"
        "Response type 3: complex reasoning\nQuestion: Why?\nAnswer: Because.\n",
        "x");
    CHECK(conv.short_qa == original.short_qa);
    CHECK(conv.detailed_description == original.detailed_description);
    CHECK(conv.complex_qa == original.complex_qa);
}

TEST_CASE("parse_conversation tolerates markdown and abbreviations", "[dialogue]") {
    std::string messy =
        "### **Response Type 1: Conversation**\n"
        "1. **Q:** What is it?\n"
        "   **A:** A thing.\n"
        "**Response type 2**: detailed description\n"
        "> Something detailed.\n"
        "## Response type 3 - complex reasoning\n"
        "Q: Why though?\nA: Reasons.\nMore reasons on a second line.\n";
    auto conv = dialogue::parse_conversation(messy, "x");
    REQUIRE(conv.short_qa.size() == 1);
    CHECK(conv.short_qa[0].question == "What is it?");
    CHECK(conv.short_qa[0].answer == "A thing.");
    CHECK(conv.detailed_description == "Something detailed.");
    REQUIRE(conv.complex_qa.size() == 1);
    CHECK(conv.complex_qa[0].answer == "Reasons.\nMore reasons on a second line.");

    dialogue::ParsePolicy strict;
    strict.allow_abbreviations = false;
    auto conv_strict = dialogue::parse_conversation(messy, "x", strict);
    CHECK(conv_strict.complex_qa.empty());
}

TEST_CASE("serialize round-trips section structure", "[dialogue][property]") {
    auto conv = dialogue::parse_conversation(kExampleConversation, "gpt");
    auto serialized = dialogue::serialize_conversation(conv);
    auto reparsed = dialogue::parse_conversation(serialized, conv.producer);
    CHECK(reparsed.short_qa == conv.short_qa);
    CHECK(reparsed.detailed_description == conv.detailed_description);
    CHECK(reparsed.complex_qa == conv.complex_qa);
    CHECK(reparsed.complete());
}

TEST_CASE("fusion prompt embeds both conversations once", "[dialogue]") {
    prompts::PromptSet prompts;
    Conversation a = dialogue::parse_conversation(kExampleConversation, "gpt");
    Conversation b;
    b.raw_text = "Response type 1: conversation\nQuestion: Small?\nAnswer: Yes.\n";
    b.producer = "claude";
    auto request = dialogue::build_fusion_prompt(a, b, prompts, {"gpt", "m", 0.0});
    const std::string& text = request.messages[0].text;
    CHECK(request.max_tokens == 1024);
    CHECK(request.request_tag == "fusion");
    CHECK(text.find(a.raw_text) != std::string::npos);
    CHECK(text.find(b.raw_text) != std::string::npos);
    CHECK(text.find("most relevant and insightful elements from both") != std::string::npos);
    // each conversation appears exactly once
    auto first = text.find(b.raw_text);
    CHECK(text.find(b.raw_text, first + 1) == std::string::npos);

    // degenerate: one side empty still renders
    Conversation empty;
    empty.producer = "gpt";
    auto degraded = dialogue::build_fusion_prompt(empty, b, prompts, {"gpt", "m", 0.0});
    CHECK(degraded.messages[0].text.find("<<<BEGIN CONVERSATION A>>>") != std::string::npos);
}

TEST_CASE("wordcount probe", "[dialogue]") {
    Conversation conv;
    conv.short_qa.push_back({"How many words are in the English caption?",
                             "The caption has 5 words."});
    auto result = dialogue::wordcount_probe(conv, "soap is in the dish");
    CHECK(result.found);
    REQUIRE(result.stated.has_value());
    CHECK(*result.stated == 5);
    REQUIRE(result.correct.has_value());
    CHECK(*result.correct);

    SECTION("wrong count detected") {
        conv.short_qa[0].answer = "It has 6 words.";
        auto wrong = dialogue::wordcount_probe(conv, "soap is in the dish");
        CHECK(wrong.found);
        CHECK_FALSE(*wrong.correct);
    }
    SECTION("no matching question") {
        Conversation other;
        other.short_qa.push_back({"What color is the soap?", "White."});
        auto missing = dialogue::wordcount_probe(other, "soap is in the dish");
        CHECK_FALSE(missing.found);
        CHECK_FALSE(missing.stated.has_value());
        CHECK_FALSE(missing.correct.has_value());
    }
    SECTION("number words are indeterminate") {
        conv.short_qa[0].answer = "five words";
        auto vague = dialogue::wordcount_probe(conv, "soap is in the dish");
        CHECK(vague.found);
        CHECK_FALSE(vague.stated.has_value());
        CHECK_FALSE(vague.correct.has_value());
    }
}

TEST_CASE("mock context pipeline fuses and probes correctly", "[dialogue]") {
    TempDir tmp;
    SystemClock clock;
    gateway::Gateway gw(gateway::ContentCache(tmp.path), clock);
    gw.add_backend(std::make_unique<gateway::MockBackend>(7, "mock-a"));
    gw.add_backend(std::make_unique<gateway::MockBackend>(9, "mock-b"));

    prompts::PromptSet prompts;
    dialogue::ContextStages stages{{"mock-a", "m", 0.0}, {"mock-b", "m", 0.0},
                                   {"mock-a", "m", 0.0}};
    auto record = record_for("soap is in the dish");

    auto fused = dialogue::generate_fused_context(record, "", gw, stages, prompts);
    CHECK(fused.conversation.producer == "fusion");
    CHECK(fused.conversation.complete());
    CHECK(fused.cache_keys.size() == 3);
    CHECK(fused.warnings.empty());
    CHECK(gw.stats().backend_calls == 3);

    auto probe = dialogue::wordcount_probe(fused.conversation, record.english_caption);
    CHECK(probe.found);
    CHECK(probe.correct.value_or(false));

    SECTION("warm cache re-run issues zero backend calls") {
        auto again = dialogue::generate_fused_context(record, "", gw, stages, prompts);
        CHECK(gw.stats().backend_calls == 3);
        CHECK(again.cache_keys == fused.cache_keys);
        CHECK(again.conversation.raw_text == fused.conversation.raw_text);
    }
    SECTION("deterministic across repeated cold runs") {
        TempDir tmp2;
        gateway::Gateway gw2(gateway::ContentCache(tmp2.path), clock);
        gw2.add_backend(std::make_unique<gateway::MockBackend>(7, "mock-a"));
        gw2.add_backend(std::make_unique<gateway::MockBackend>(9, "mock-b"));
        auto fused2 = dialogue::generate_fused_context(record, "", gw2, stages, prompts);
        CHECK(fused2.conversation.raw_text == fused.conversation.raw_text);
    }
}

TEST_CASE("one failing context backend degrades to single-source fusion", "[dialogue]") {
    TempDir tmp;
    ManualClock clock;

    // mock-a works; "broken" always 500s
    class BrokenBackend final : public gateway::Backend {
    public:
        std::string id() const override { return "broken"; }
        gateway::BackendResponse complete_raw(const gateway::BackendRequest&) override {
            throw gateway::TransientBackendError("HTTP 500");
        }
    };
    gateway::Gateway gw(gateway::ContentCache(tmp.path), clock);
    gw.add_backend(std::make_unique<gateway::MockBackend>(7, "mock-a"));
    gw.add_backend(std::make_unique<BrokenBackend>());

    prompts::PromptSet prompts;
    dialogue::ContextStages stages{{"mock-a", "m", 0.0}, {"broken", "m", 0.0},
                                   {"mock-a", "m", 0.0}};
    auto record = record_for("a cat on a mat");

    auto fused = dialogue::generate_fused_context(record, "", gw, stages, prompts);
    CHECK(fused.conversation.producer == "fusion");
    CHECK(fused.cache_keys.size() == 2);  // one context + fusion
    REQUIRE(fused.warnings.size() == 1);
    CHECK(fused.warnings[0].find("broken") != std::string::npos);
    CHECK(fused.conversation.complete());

    SECTION("both failing propagates the error") {
        dialogue::ContextStages both{{"broken", "m", 0.0}, {"broken", "m", 0.0},
                                     {"mock-a", "m", 0.0}};
        CHECK_THROWS_AS(dialogue::generate_fused_context(record, "", gw, both, prompts),
                        BackendError);
    }
}

TEST_CASE("conversation json round-trip", "[dialogue]") {
    auto conv = dialogue::parse_conversation(kExampleConversation, "gpt");
    nlohmann::json j = conv;
    auto back = j.get<Conversation>();
    CHECK(back.short_qa == conv.short_qa);
    CHECK(back.detailed_description == conv.detailed_description);
    CHECK(back.raw_text == conv.raw_text);
    CHECK(j["complete"] == true);
}
