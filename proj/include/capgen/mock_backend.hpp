// Copyright (C) 2026 The capgen authors
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic offline backend. Output is a pure function of (seed,
// cache_key). It understands the default prompt templates well enough to
// answer in character: context requests get a well-formed three-section
// conversation whose word-count answer is computed from the caption found
// in the prompt; caption requests get a single line in the target script.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "capgen/dialogue.hpp"
#include "capgen/gateway.hpp"
#include "capgen/text.hpp"

namespace capgen::gateway {

namespace mock_detail {

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::uint64_t splitmix(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

template <std::size_t N>
const char* pick(std::uint64_t& state, const std::array<const char*, N>& words) {
    return words[splitmix(state) % N];
}

}  // namespace mock_detail

class MockBackend final : public Backend {
public:
    explicit MockBackend(std::uint64_t seed = 7, std::string id = "mock")
        : seed_(seed), id_(std::move(id)) {}

    std::string id() const override { return id_; }

    BackendResponse complete_raw(const BackendRequest& request) override {
        return mock_complete(request, seed_);
    }

    /// Deterministic function of (seed, cache_key(request)).
    static BackendResponse mock_complete(const BackendRequest& request, std::uint64_t seed) {
        std::uint64_t state = seed ^ mock_detail::fnv1a(cache_key(request));
        const std::string& prompt =
            request.messages.empty() ? std::string() : request.messages.back().text;

        BackendResponse response;
        response.finish_reason = FinishReason::complete;
        if (request.request_tag == "context")
            response.text = context_reply(prompt, state);
        else if (request.request_tag == "fusion")
            response.text = fusion_reply(prompt);
        else if (request.request_tag == "caption")
            response.text = caption_reply(prompt, state);
        else if (request.request_tag == "translate")
            response.text = translate_reply(prompt);
        else
            response.text = "mock reply " + std::to_string(mock_detail::splitmix(state) % 100000);
        response.usage = TokenUsage{static_cast<long>(prompt.size() / 4),
                                    static_cast<long>(response.text.size() / 4)};
        return response;
    }

private:
    // The context prompt ends with "{caption}, {image marker}. Do not
    // hallucinate!"; peel the fixed suffixes off the last line.
    static std::string caption_from_context_prompt(std::string_view prompt) {
        std::string_view s = prompt;
        while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' '))
            s.remove_suffix(1);
        std::size_t line_start = s.rfind('\n');
        if (line_start != std::string_view::npos) s = s.substr(line_start + 1);
        constexpr std::string_view kSuffix = ". Do not hallucinate!";
        if (s.size() >= kSuffix.size() && s.substr(s.size() - kSuffix.size()) == kSuffix)
            s.remove_suffix(kSuffix.size());
        std::size_t marker = s.rfind(", [");
        if (marker != std::string_view::npos) s = s.substr(0, marker);
        return std::string(s);
    }

    static std::string context_reply(std::string_view prompt, std::uint64_t& state) {
        const std::string caption = caption_from_context_prompt(prompt);
        const int words = text::word_count(caption);

        static constexpr std::array<const char*, 6> kSubjects = {
            "scene", "setting", "arrangement", "foreground", "background", "composition"};
        static constexpr std::array<const char*, 6> kAdjectives = {
            "ordinary", "busy", "quiet", "cluttered", "well-lit", "plain"};
        static constexpr std::array<const char*, 5> kPlaces = {
            "indoors", "outdoors", "in a room", "near a wall", "in the open"};

        std::string out = "Response type 1: conversation\n";
        out += "Question: What does the image show?\n";
        out += "Answer: The image shows " + (caption.empty() ? "an unspecified scene" : caption) +
               ".\n";
        out += "Question: How many words are in the English caption?\n";
        out += "Answer: The English caption has " + std::to_string(words) + " words.\n";
        out += std::string("Question: Where does the ") + mock_detail::pick(state, kSubjects) +
               " appear to be?\n";
        out += std::string("Answer: It appears to be ") + mock_detail::pick(state, kPlaces) +
               ".\n";
        out += "\nResponse type 2: detailed description\n";
        out += "The image shows " + (caption.empty() ? "an unspecified scene" : caption) +
               ". The " + mock_detail::pick(state, kSubjects) + " looks " +
               mock_detail::pick(state, kAdjectives) + ", with the main subject " +
               mock_detail::pick(state, kPlaces) + ".\n";
        out += "\nResponse type 3: complex reasoning\n";
        out += "Question: What broader situation could explain this scene?\n";
        out += std::string("Answer: Given the ") + mock_detail::pick(state, kAdjectives) + " " +
               mock_detail::pick(state, kSubjects) +
               ", the most plausible explanation is an everyday moment captured " +
               mock_detail::pick(state, kPlaces) + ".\n";
        return out;
    }

    static std::string extract_between(std::string_view text, std::string_view begin,
                                       std::string_view end) {
        std::size_t b = text.find(begin);
        if (b == std::string_view::npos) return {};
        b += begin.size();
        std::size_t e = text.find(end, b);
        if (e == std::string_view::npos) return {};
        std::string_view inner = text.substr(b, e - b);
        while (!inner.empty() && inner.front() == '\n') inner.remove_prefix(1);
        while (!inner.empty() && inner.back() == '\n') inner.remove_suffix(1);
        return std::string(inner);
    }

    // Re-parses the two embedded conversations and merges them, keeping the
    // word-count QA intact.
    static std::string fusion_reply(std::string_view prompt) {
        auto raw_a = extract_between(prompt, "<<<BEGIN CONVERSATION A>>>", "<<<END CONVERSATION A>>>");
        auto raw_b = extract_between(prompt, "<<<BEGIN CONVERSATION B>>>", "<<<END CONVERSATION B>>>");
        auto conv_a = dialogue::parse_conversation(raw_a, "a");
        auto conv_b = dialogue::parse_conversation(raw_b, "b");

        dialogue::Conversation merged;
        merged.producer = "fusion";
        auto add_short = [&](const dialogue::QAPair& qa) {
            for (const auto& existing : merged.short_qa)
                if (existing.question == qa.question) return;
            if (merged.short_qa.size() < 5) merged.short_qa.push_back(qa);
        };
        for (const auto& qa : conv_a.short_qa) add_short(qa);
        for (const auto& qa : conv_b.short_qa) add_short(qa);
        merged.detailed_description =
            conv_a.detailed_description.size() >= conv_b.detailed_description.size()
                ? conv_a.detailed_description
                : conv_b.detailed_description;
        auto add_complex = [&](const dialogue::QAPair& qa) {
            for (const auto& existing : merged.complex_qa)
                if (existing.question == qa.question) return;
            if (merged.complex_qa.size() < 2) merged.complex_qa.push_back(qa);
        };
        for (const auto& qa : conv_a.complex_qa) add_complex(qa);
        for (const auto& qa : conv_b.complex_qa) add_complex(qa);
        return dialogue::serialize_conversation(merged);
    }

    static corpus::LanguageTag language_from_prompt(std::string_view prompt) {
        for (auto lang : corpus::kAllLanguages) {
            std::string needle = "Provide ONLY the " + corpus::language_name(lang) + " caption";
            if (prompt.find(needle) != std::string_view::npos) return lang;
        }
        // translation prompts name the language in the instruction instead
        for (auto lang : corpus::kAllLanguages) {
            std::string needle = "into " + corpus::language_name(lang) + ".";
            if (prompt.find(needle) != std::string_view::npos) return lang;
        }
        return corpus::LanguageTag::hi;
    }

    static std::string caption_reply(std::string_view prompt, std::uint64_t& state) {
        const corpus::LanguageTag lang = language_from_prompt(prompt);

        // target length tracks the embedded English caption
        int target_words = 5;
        constexpr std::string_view kCaptionMarker = "English caption (Weight: ";
        std::size_t pos = prompt.find(kCaptionMarker);
        if (pos != std::string_view::npos) {
            std::size_t colon = prompt.find("): ", pos);
            if (colon != std::string_view::npos) {
                std::size_t eol = prompt.find('\n', colon);
                std::string caption(prompt.substr(
                    colon + 3, eol == std::string_view::npos ? prompt.size() - colon - 3
                                                             : eol - colon - 3));
                target_words = std::clamp(text::word_count(caption), 3, 12);
            }
        }

        static constexpr std::array<const char*, 10> kHindi = {
            "चित्र", "में", "एक", "लोग", "पानी", "घर", "पेड़", "आदमी", "महिला", "सड़क"};
        static constexpr std::array<const char*, 10> kBengali = {
            "ছবিতে", "একটি", "মানুষ", "রাস্তা", "পানি", "বাড়ি", "গাছ", "লোক", "নারী", "শিশু"};
        static constexpr std::array<const char*, 10> kMalayalam = {
            "ചിത്രം", "ഒരു", "ആളുകൾ", "റോഡ്", "വെള്ളം", "വീട്", "മരം", "മനുഷ്യൻ", "സ്ത്രീ", "കുട്ടി"};
        static constexpr std::array<const char*, 10> kHausa = {
            "hoton", "yana", "nuna", "mutane", "hanya", "ruwa", "gida", "itace", "mutum", "mace"};

        std::string out;
        for (int i = 0; i < target_words; ++i) {
            if (i) out += ' ';
            switch (lang) {
                case corpus::LanguageTag::hi: out += mock_detail::pick(state, kHindi); break;
                case corpus::LanguageTag::bn: out += mock_detail::pick(state, kBengali); break;
                case corpus::LanguageTag::ml: out += mock_detail::pick(state, kMalayalam); break;
                case corpus::LanguageTag::ha: out += mock_detail::pick(state, kHausa); break;
            }
        }
        return out;
    }

    // Identity translation tagged with the language so tests can see both
    // the routing and the segment boundaries.
    static std::string translate_reply(std::string_view prompt) {
        const corpus::LanguageTag lang = language_from_prompt(prompt);
        constexpr std::string_view kMarker = "Text: ";
        std::size_t pos = prompt.find(kMarker);
        std::string_view payload =
            pos == std::string_view::npos ? std::string_view() : prompt.substr(pos + kMarker.size());
        while (!payload.empty() && payload.back() == '\n') payload.remove_suffix(1);
        return "[" + corpus::to_string(lang) + "] " + std::string(payload);
    }

    std::uint64_t seed_;
    std::string id_;
};

}  // namespace capgen::gateway
