// Copyright (C) 2026 The capgen authors
// SPDX-License-Identifier: Apache-2.0
//
// Weighted caption generation: renders the caption prompt with the
// context/English weight split, calls the gateway, post-processes and
// validates the reply. Validation is a lint, not a gate: a bad caption
// comes back with valid=false and notes, never as an error.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "capgen/corpus.hpp"
#include "capgen/dialogue.hpp"
#include "capgen/gateway.hpp"
#include "capgen/prompts.hpp"
#include "capgen/script.hpp"
#include "capgen/strings.hpp"
#include "capgen/template.hpp"
#include "capgen/text.hpp"
#include "capgen/translation.hpp"

namespace capgen::captioner {

/// Percent split between the translated conversation (context_weight) and
/// the English caption (english_weight). Always sums to 100.
struct WeightConfig {
    int context_weight;
    int english_weight;

    WeightConfig(int context, int english) : context_weight(context), english_weight(english) {
        if (context < 0 || context > 100 || english < 0 || english > 100 ||
            context + english != 100)
            throw std::invalid_argument("WeightConfig: weights must be in [0,100] and sum to 100");
    }

    /// The sweep convention: x% context, (100-x)% English.
    static WeightConfig from_context_percent(int x) { return WeightConfig(x, 100 - x); }

    bool operator==(const WeightConfig&) const = default;
};

struct GeneratedCaption {
    std::string text;
    corpus::LanguageTag language = corpus::LanguageTag::hi;
    WeightConfig weights{0, 100};
    std::vector<std::string> provenance;  // cache keys of every upstream call + own call
    bool valid = false;
    std::vector<std::string> validation_notes;
};

inline gateway::BackendRequest build_caption_prompt(const std::string& english_caption,
                                                    const std::string& translated_context,
                                                    const WeightConfig& weights,
                                                    corpus::LanguageTag language,
                                                    const prompts::PromptSet& prompts,
                                                    const dialogue::StageBinding& stage) {
    if (strutil::trim_view(english_caption).empty())
        throw std::invalid_argument("build_caption_prompt: empty caption");
    templates::Values values{
        {"target_language", corpus::language_name(language)},
        {"english_weight", std::to_string(weights.english_weight)},
        {"context_weight", std::to_string(weights.context_weight)},
        {"english_caption", english_caption},
        {"translated_conversation", translated_context},
    };
    gateway::BackendRequest request;
    request.backend_id = stage.backend_id;
    request.model_id = stage.model_id;
    request.temperature = stage.temperature;
    request.messages = {{"user", templates::render_strict(prompts.caption_prompt, values)}};
    request.max_tokens = gateway::kCaptionMaxTokens;
    request.request_tag = "caption";
    return request;
}

/// Strips wrapping quotes/markdown and outer whitespace. Interior newlines
/// are kept; the validator flags them.
inline std::string postprocess_caption(std::string_view raw) {
    std::string_view s = strutil::trim_view(raw);
    auto strip_pair = [&](std::string_view open, std::string_view close) {
        if (s.size() >= open.size() + close.size() && s.substr(0, open.size()) == open &&
            s.substr(s.size() - close.size()) == close) {
            s = strutil::trim_view(
                s.substr(open.size(), s.size() - open.size() - close.size()));
            return true;
        }
        return false;
    };
    for (bool stripped = true; stripped;) {
        stripped = false;
        stripped |= strip_pair("\"", "\"");
        stripped |= strip_pair("'", "'");
        stripped |= strip_pair("“", "”");  // curly double quotes
        stripped |= strip_pair("‘", "’");
        stripped |= strip_pair("«", "»");
        stripped |= strip_pair("**", "**");
        stripped |= strip_pair("*", "*");
        stripped |= strip_pair("`", "`");
    }
    return std::string(s);
}

/// Checks (a) the dominant script matches the language, (b) the text is a
/// single line, (c) the token-length ratio against the English caption is
/// within [1/3, 3]. Total and deterministic.
inline std::pair<bool, std::vector<std::string>> validate_caption(
    const std::string& caption_text, corpus::LanguageTag language,
    const std::string& english_caption) {
    std::vector<std::string> notes;

    auto counts = script::count_scripts(caption_text);
    if (counts.total_letters == 0) {
        notes.push_back("script mismatch: no letters found");
    } else {
        double fraction = static_cast<double>(counts.of(script::expected_script(language))) /
                          static_cast<double>(counts.total_letters);
        if (fraction < 0.8) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.0f%%", fraction * 100);
            notes.push_back("script mismatch: expected script covers only " + std::string(buf) +
                            " of letters");
        }
    }

    std::string_view trimmed = strutil::trim_view(caption_text);
    if (trimmed.find('\n') != std::string_view::npos) notes.push_back("multi-line output");

    int caption_tokens = text::word_count(caption_text);
    int english_tokens = text::word_count(english_caption);
    if (caption_tokens == 0 || english_tokens == 0) {
        notes.push_back("length ratio undefined (empty side)");
    } else {
        double ratio = static_cast<double>(caption_tokens) / english_tokens;
        if (ratio < 1.0 / 3.0 || ratio > 3.0) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "length ratio %.2f outside [1/3, 3]", ratio);
            notes.push_back(buf);
        }
    }
    return {notes.empty(), notes};
}

/// One gateway call plus validation. `upstream_keys` chains the context and
/// translation cache keys into the caption's provenance.
inline GeneratedCaption generate_caption(const corpus::RegionRecord& record,
                                         const translation::TranslatedContext& context,
                                         const WeightConfig& weights, gateway::Gateway& gw,
                                         const prompts::PromptSet& prompts,
                                         const dialogue::StageBinding& stage,
                                         const std::vector<std::string>& upstream_keys = {}) {
    auto request = build_caption_prompt(record.english_caption, context.text, weights,
                                        record.language, prompts, stage);
    auto response = gw.complete(request);

    GeneratedCaption caption;
    caption.text = postprocess_caption(response.text);
    caption.language = record.language;
    caption.weights = weights;
    caption.provenance = upstream_keys;
    caption.provenance.push_back(response.cache_key);
    auto [valid, notes] = validate_caption(caption.text, record.language, record.english_caption);
    caption.valid = valid;
    caption.validation_notes = std::move(notes);
    return caption;
}

}  // namespace capgen::captioner
