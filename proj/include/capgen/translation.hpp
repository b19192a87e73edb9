// Copyright (C) 2026 The capgen authors
// SPDX-License-Identifier: Apache-2.0
//
// Per-language translation routing and segment-wise translation of fused
// conversations. Indic languages go to a dedicated MT service; Hausa goes
// through the LLM gateway. Scaffold labels ("Question:"/"Answer:") are
// never round-tripped through a translator; they are re-inserted locally
// from a fixed per-language table.
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "capgen/corpus.hpp"
#include "capgen/dialogue.hpp"
#include "capgen/errors.hpp"
#include "capgen/gateway.hpp"
#include "capgen/prompts.hpp"
#include "capgen/template.hpp"

namespace capgen::translation {

enum class TranslatorKind { dedicated_mt, llm };

struct TranslatorRoute {
    corpus::LanguageTag language;
    TranslatorKind translator;
    std::string backend_id;
};

/// hi, bn, ml -> dedicated MT; ha -> LLM. Total over the supported tags.
inline TranslatorRoute route(corpus::LanguageTag language) {
    switch (language) {
        case corpus::LanguageTag::hi:
        case corpus::LanguageTag::bn:
        case corpus::LanguageTag::ml:
            return {language, TranslatorKind::dedicated_mt, "indictrans2"};
        case corpus::LanguageTag::ha:
            return {language, TranslatorKind::llm, "llm"};
    }
    throw ConfigError("route: unsupported language");
}

/// String-tag convenience; unknown tags raise ConfigError.
inline TranslatorRoute route_tag(std::string_view tag) {
    return route(corpus::require_language(tag));
}

struct TranslationResult {
    std::vector<std::string> texts;
    std::vector<std::string> cache_keys;
};

class Translator {
public:
    virtual ~Translator() = default;
    virtual std::string id() const = 0;
    /// Translates English segments into the target language, one output per
    /// input, order preserved.
    virtual TranslationResult translate(const std::vector<std::string>& segments,
                                        corpus::LanguageTag target) = 0;
};

/// Identity translator that tags each segment with the language code.
/// Offline stand-in for the MT service.
class MockTranslator final : public Translator {
public:
    std::string id() const override { return "mock-mt"; }
    TranslationResult translate(const std::vector<std::string>& segments,
                                corpus::LanguageTag target) override {
        TranslationResult result;
        result.texts.reserve(segments.size());
        for (const auto& s : segments)
            result.texts.push_back("[" + corpus::to_string(target) + "] " + s);
        return result;
    }
};

/// Adds content-addressed caching (and call counting) around any
/// translator. One cache entry per segment batch.
class CachedTranslator final : public Translator {
public:
    CachedTranslator(std::unique_ptr<Translator> inner, gateway::ContentCache cache,
                     gateway::AuditLog* audit = nullptr)
        : inner_(std::move(inner)), cache_(std::move(cache)), audit_(audit) {}

    std::string id() const override { return inner_->id(); }

    TranslationResult translate(const std::vector<std::string>& segments,
                                corpus::LanguageTag target) override {
        if (segments.empty()) return {};
        std::string canonical = "mt\x1f" + inner_->id() + "\x1f" + "en-" +
                                corpus::to_string(target);
        for (const auto& s : segments) {
            canonical += '\x1e';
            canonical += s;
        }
        const std::string key = sha256_hex(canonical);
        auto t0 = std::chrono::steady_clock::now();
        if (auto entry = cache_.get(key)) {
            TranslationResult result;
            result.texts = entry->at("translations").get<std::vector<std::string>>();
            result.cache_keys = {key};
            record(target, key, true, t0);
            return result;
        }
        TranslationResult result = inner_->translate(segments, target);
        inner_calls_.fetch_add(1);
        if (result.texts.size() != segments.size())
            throw BackendError("translator " + inner_->id() + " returned " +
                               std::to_string(result.texts.size()) + " translations for " +
                               std::to_string(segments.size()) + " segments");
        cache_.put(key, nlohmann::json{{"translations", result.texts},
                                       {"target", corpus::to_string(target)},
                                       {"translator", inner_->id()}});
        result.cache_keys = {key};
        record(target, key, false, t0);
        return result;
    }

    long inner_calls() const { return inner_calls_.load(); }

private:
    void record(corpus::LanguageTag target, const std::string& key, bool hit,
                std::chrono::steady_clock::time_point t0) {
        if (!audit_) return;
        double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        audit_->record("translate", inner_->id() + ":" + corpus::to_string(target), key, hit, ms);
    }

    std::unique_ptr<Translator> inner_;
    gateway::ContentCache cache_;
    gateway::AuditLog* audit_;
    std::atomic<long> inner_calls_{0};
};

/// Translation via the chat gateway with a minimal prompt, one call per
/// segment. Used for languages without a dedicated MT model.
class LlmTranslator final : public Translator {
public:
    LlmTranslator(gateway::Gateway& gw, dialogue::StageBinding stage,
                  prompts::PromptSet prompts)
        : gw_(gw), stage_(std::move(stage)), prompts_(std::move(prompts)) {}

    std::string id() const override { return "llm:" + stage_.backend_id; }

    TranslationResult translate(const std::vector<std::string>& segments,
                                corpus::LanguageTag target) override {
        TranslationResult result;
        for (std::size_t i = 0; i < segments.size(); ++i) {
            gateway::BackendRequest request;
            request.backend_id = stage_.backend_id;
            request.model_id = stage_.model_id;
            request.temperature = stage_.temperature;
            request.max_tokens = gateway::kContextMaxTokens;
            request.request_tag = "translate";
            request.messages = {
                {"user", templates::render_strict(
                             prompts_.translate_prompt,
                             {{"target_language", corpus::language_name(target)},
                              {"segment", segments[i]}})}};
            try {
                auto response = gw_.complete(request);
                result.texts.push_back(response.text);
                result.cache_keys.push_back(response.cache_key);
            } catch (const std::exception& e) {
                throw BackendError("translation failed at segment " + std::to_string(i) + ": " +
                                   e.what());
            }
        }
        return result;
    }

private:
    gateway::Gateway& gw_;
    dialogue::StageBinding stage_;
    prompts::PromptSet prompts_;
};

/// Target-side scaffold labels.
struct LabelTable {
    std::string question;
    std::string answer;
};

inline LabelTable labels_for(corpus::LanguageTag lang) {
    switch (lang) {
        case corpus::LanguageTag::hi: return {"प्रश्न:", "उत्तर:"};
        case corpus::LanguageTag::bn: return {"প্রশ্ন:", "উত্তর:"};
        case corpus::LanguageTag::ml: return {"ചോദ്യം:", "ഉത്തരം:"};
        case corpus::LanguageTag::ha: return {"Tambaya:", "Amsa:"};
    }
    return {"Question:", "Answer:"};
}

struct TranslatedContext {
    std::string text;  // reassembled target-language context
    std::vector<std::pair<std::string, std::string>> segments;  // (source, target), in order
    std::vector<std::size_t> skipped;  // indices of empty source segments
    std::vector<std::string> cache_keys;

    bool empty() const { return segments.empty(); }
};

namespace detail {

enum class SegmentKind { question, answer, description };

struct SourceSegment {
    SegmentKind kind;
    std::string text;
};

inline std::vector<SourceSegment> conversation_segments(const dialogue::Conversation& conv) {
    std::vector<SourceSegment> segments;
    for (const auto& qa : conv.short_qa) {
        segments.push_back({SegmentKind::question, qa.question});
        segments.push_back({SegmentKind::answer, qa.answer});
    }
    segments.push_back({SegmentKind::description, conv.detailed_description});
    for (const auto& qa : conv.complex_qa) {
        segments.push_back({SegmentKind::question, qa.question});
        segments.push_back({SegmentKind::answer, qa.answer});
    }
    return segments;
}

}  // namespace detail

/// Segment-wise translation of a conversation: each question, each answer
/// and the description travel as separate segments; empty segments are
/// skipped and recorded. Order is preserved.
inline TranslatedContext translate_conversation(const dialogue::Conversation& conv,
                                                corpus::LanguageTag language,
                                                Translator& translator) {
    TranslatedContext context;
    auto source = detail::conversation_segments(conv);
    if (conv.raw_text.empty() && conv.short_qa.empty() && conv.complex_qa.empty() &&
        conv.detailed_description.empty())
        return context;  // nothing to translate, no backend calls

    std::vector<std::string> batch;
    std::vector<std::size_t> batch_index;
    for (std::size_t i = 0; i < source.size(); ++i) {
        if (source[i].text.empty()) {
            context.skipped.push_back(i);
            continue;
        }
        batch.push_back(source[i].text);
        batch_index.push_back(i);
    }
    if (batch.empty()) return context;

    TranslationResult result = translator.translate(batch, language);
    if (result.texts.size() != batch.size())
        throw BackendError("translator returned a mismatched segment count");
    context.cache_keys = result.cache_keys;

    LabelTable labels = labels_for(language);
    std::string text;
    for (std::size_t b = 0; b < batch.size(); ++b) {
        const auto& seg = source[batch_index[b]];
        context.segments.emplace_back(seg.text, result.texts[b]);
        if (!text.empty()) text += '\n';
        switch (seg.kind) {
            case detail::SegmentKind::question:
                text += labels.question + " " + result.texts[b];
                break;
            case detail::SegmentKind::answer:
                text += labels.answer + " " + result.texts[b];
                break;
            case detail::SegmentKind::description:
                text += result.texts[b];
                break;
        }
    }
    context.text = std::move(text);
    return context;
}

inline void to_json(nlohmann::json& j, const TranslatedContext& ctx) {
    nlohmann::json segs = nlohmann::json::array();
    for (const auto& [src, tgt] : ctx.segments) segs.push_back({{"source", src}, {"target", tgt}});
    j = {{"text", ctx.text},
         {"segments", segs},
         {"skipped", ctx.skipped},
         {"cache_keys", ctx.cache_keys}};
}

inline void from_json(const nlohmann::json& j, TranslatedContext& ctx) {
    ctx.text = j.at("text").get<std::string>();
    ctx.segments.clear();
    for (const auto& s : j.at("segments"))
        ctx.segments.emplace_back(s.at("source").get<std::string>(),
                                  s.at("target").get<std::string>());
    ctx.skipped = j.value("skipped", std::vector<std::size_t>{});
    ctx.cache_keys = j.value("cache_keys", std::vector<std::string>{});
}

}  // namespace capgen::translation
