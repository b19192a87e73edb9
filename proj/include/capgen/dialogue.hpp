// Copyright (C) 2026 The capgen authors
// SPDX-License-Identifier: Apache-2.0
//
// Conversation generation: renders the context prompt, parses model output
// into the three response types, fuses two conversations, and runs the
// word-count probe. Parsing is total; degraded model output produces an
// incomplete Conversation, never an error.
#pragma once

#include <cctype>
#include <future>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "capgen/corpus.hpp"
#include "capgen/gateway.hpp"
#include "capgen/prompts.hpp"
#include "capgen/strings.hpp"
#include "capgen/template.hpp"
#include "capgen/text.hpp"

namespace capgen::dialogue {

struct QAPair {
    std::string question;
    std::string answer;
    bool operator==(const QAPair&) const = default;
};

struct Conversation {
    std::vector<QAPair> short_qa;
    std::string detailed_description;
    std::vector<QAPair> complex_qa;
    std::string raw_text;  // verbatim model output, kept for audit
    std::string producer;  // backend_id, or "fusion"

    bool complete() const {
        return !short_qa.empty() && !detailed_description.empty() && !complex_qa.empty();
    }
};

struct ParsePolicy {
    bool allow_abbreviations = true;  // accept "Q:" / "A:" besides "Question:" / "Answer:"
    bool allow_markdown = true;       // tolerate **bold**, headings, list numbering
};

namespace detail {

using strutil::lower_ascii;
using strutil::trim_view;

// Strips markdown clutter model output tends to carry: emphasis markers,
// heading hashes, blockquote arrows, list numbering.
inline std::string_view strip_decoration(std::string_view s, bool markdown) {
    s = trim_view(s);
    if (!markdown) return s;
    while (!s.empty() && (s.front() == '#' || s.front() == '>' || s.front() == '*' ||
                          s.front() == '-' || s.front() == '_' || s.front() == '`'))
        s.remove_prefix(1);
    s = trim_view(s);
    // "1." / "2)" list numbering before a Question:/Answer: prefix
    std::size_t i = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i > 0 && i < s.size() && (s[i] == '.' || s[i] == ')')) {
        std::string_view rest = trim_view(s.substr(i + 1));
        if (!rest.empty()) s = rest;
    }
    while (!s.empty() && (s.back() == '*' || s.back() == '_' || s.back() == '`'))
        s.remove_suffix(1);
    return trim_view(s);
}

// Returns 1/2/3 if the line is a "Response type N" header, 0 otherwise.
inline int section_of(std::string_view line, const ParsePolicy& policy) {
    std::string low = lower_ascii(strip_decoration(line, policy.allow_markdown));
    constexpr std::string_view kHeader = "response type";
    if (low.rfind(kHeader, 0) != 0) return 0;
    for (char c : low.substr(kHeader.size())) {
        if (c == '1') return 1;
        if (c == '2') return 2;
        if (c == '3') return 3;
        if (!std::isspace(static_cast<unsigned char>(c)) && c != ':' && c != '-') break;
    }
    return 0;
}

// If the line starts a question or answer, returns the payload after the
// prefix; kind receives 'q' or 'a'.
inline std::optional<std::string> qa_payload(std::string_view line, char& kind,
                                             const ParsePolicy& policy) {
    std::string_view s = strip_decoration(line, policy.allow_markdown);
    std::string low = lower_ascii(s);
    auto match = [&](std::string_view prefix) -> std::optional<std::string> {
        if (low.rfind(prefix, 0) != 0) return std::nullopt;
        std::string_view payload = s.substr(prefix.size());
        if (policy.allow_markdown) {
            payload = trim_view(payload);
            while (!payload.empty() && (payload.front() == '*' || payload.front() == '_'))
                payload.remove_prefix(1);
        }
        return std::string(trim_view(payload));
    };
    for (std::string_view prefix : {"question:", "q:"}) {
        if (prefix == "q:" && !policy.allow_abbreviations) continue;
        if (auto payload = match(prefix)) {
            kind = 'q';
            return payload;
        }
    }
    for (std::string_view prefix : {"answer:", "a:"}) {
        if (prefix == "a:" && !policy.allow_abbreviations) continue;
        if (auto payload = match(prefix)) {
            kind = 'a';
            return payload;
        }
    }
    return std::nullopt;
}

using strutil::split_lines;

}  // namespace detail

/// Splits model output on "Response type 1/2/3" headers and extracts
/// Question/Answer pairs. Total: anything unrecognized stays in raw_text
/// and the result is simply not `complete`.
inline Conversation parse_conversation(std::string_view text, std::string producer,
                                       const ParsePolicy& policy = {}) {
    Conversation conv;
    conv.raw_text = std::string(text);
    conv.producer = std::move(producer);

    int section = 0;  // 0 = preamble; QA found there is treated as section 1
    std::vector<std::string> desc_lines;
    std::string pending_question;
    std::string pending_answer;
    bool in_answer = false;

    auto flush_qa = [&](int target_section) {
        auto q = detail::trim_view(pending_question);
        auto a = detail::trim_view(pending_answer);
        if (!q.empty() && !a.empty()) {
            QAPair pair{std::string(q), std::string(a)};
            if (target_section == 3)
                conv.complex_qa.push_back(std::move(pair));
            else
                conv.short_qa.push_back(std::move(pair));
        }
        pending_question.clear();
        pending_answer.clear();
        in_answer = false;
    };

    for (std::string_view raw_line : detail::split_lines(text)) {
        std::string_view line = raw_line;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        if (int next = detail::section_of(line, policy)) {
            flush_qa(section);
            section = next;
            continue;
        }
        char kind = 0;
        auto payload = detail::qa_payload(line, kind, policy);
        if (payload && section != 2) {
            if (kind == 'q') {
                flush_qa(section);
                pending_question = *payload;
            } else {
                pending_answer = *payload;
                in_answer = true;
            }
            continue;
        }
        if (section == 2) {
            desc_lines.push_back(std::string(detail::trim_view(line)));
        } else if (in_answer) {
            // multi-paragraph answer continuation
            std::string_view cont = detail::trim_view(line);
            if (!cont.empty()) {
                pending_answer += '\n';
                pending_answer += cont;
            }
        }
    }
    flush_qa(section);

    // Join description lines, collapsing leading/trailing blank lines.
    std::string desc;
    for (const auto& l : desc_lines) {
        if (l.empty() && desc.empty()) continue;
        if (!desc.empty()) desc += '\n';
        desc += l;
    }
    while (!desc.empty() && desc.back() == '\n') desc.pop_back();
    conv.detailed_description = desc;
    return conv;
}

/// Canonical three-section rendering; parse_conversation(serialize(c))
/// reproduces the structure. This is the form passed downstream.
inline std::string serialize_conversation(const Conversation& conv) {
    std::string out = "Response type 1: conversation\n";
    for (const auto& qa : conv.short_qa) {
        out += "Question: " + qa.question + "\n";
        out += "Answer: " + qa.answer + "\n";
    }
    out += "\nResponse type 2: detailed description\n";
    if (!conv.detailed_description.empty()) out += conv.detailed_description + "\n";
    out += "\nResponse type 3: complex reasoning\n";
    for (const auto& qa : conv.complex_qa) {
        out += "Question: " + qa.question + "\n";
        out += "Answer: " + qa.answer + "\n";
    }
    return out;
}

inline void to_json(nlohmann::json& j, const QAPair& qa) {
    j = {{"question", qa.question}, {"answer", qa.answer}};
}
inline void from_json(const nlohmann::json& j, QAPair& qa) {
    j.at("question").get_to(qa.question);
    j.at("answer").get_to(qa.answer);
}
inline void to_json(nlohmann::json& j, const Conversation& conv) {
    j = {{"short_qa", conv.short_qa},
         {"detailed_description", conv.detailed_description},
         {"complex_qa", conv.complex_qa},
         {"raw_text", conv.raw_text},
         {"producer", conv.producer},
         {"complete", conv.complete()}};
}
inline void from_json(const nlohmann::json& j, Conversation& conv) {
    j.at("short_qa").get_to(conv.short_qa);
    j.at("detailed_description").get_to(conv.detailed_description);
    j.at("complex_qa").get_to(conv.complex_qa);
    j.at("raw_text").get_to(conv.raw_text);
    j.at("producer").get_to(conv.producer);
}

/// Which (backend, model, sampling) serves one pipeline stage.
struct StageBinding {
    std::string backend_id;
    std::string model_id;
    double temperature = 0.0;
};

inline gateway::BackendRequest build_context_prompt(const std::string& english_caption,
                                                    const std::string& image_base64,
                                                    const prompts::PromptSet& prompts,
                                                    const StageBinding& stage) {
    if (detail::trim_view(english_caption).empty())
        throw std::invalid_argument("build_context_prompt: empty caption");
    templates::Values values{
        {"english_caption", english_caption},
        {"image_link",
         image_base64.empty() ? prompts::kNoImageMarker : prompts::kImageAttachedMarker},
        {"example_image_link", prompts::kExampleImageMarker},
    };
    gateway::BackendRequest request;
    request.backend_id = stage.backend_id;
    request.model_id = stage.model_id;
    request.temperature = stage.temperature;
    request.messages = {{"user", templates::render_strict(prompts.context_prompt, values)}};
    request.image_base64 = image_base64;
    request.max_tokens = gateway::kContextMaxTokens;
    request.request_tag = "context";
    return request;
}

inline gateway::BackendRequest build_fusion_prompt(const Conversation& conv_a,
                                                   const Conversation& conv_b,
                                                   const prompts::PromptSet& prompts,
                                                   const StageBinding& stage) {
    templates::Values values{
        {"producer_a", conv_a.producer.empty() ? "backend-a" : conv_a.producer},
        {"producer_b", conv_b.producer.empty() ? "backend-b" : conv_b.producer},
        {"conversation_a", conv_a.raw_text},
        {"conversation_b", conv_b.raw_text},
    };
    gateway::BackendRequest request;
    request.backend_id = stage.backend_id;
    request.model_id = stage.model_id;
    request.temperature = stage.temperature;
    request.messages = {{"user", templates::render_strict(prompts.fusion_prompt, values)}};
    request.max_tokens = gateway::kContextMaxTokens;
    request.request_tag = "fusion";
    return request;
}

struct FusedContext {
    Conversation conversation;
    std::vector<std::string> cache_keys;  // context call(s) + fusion call
    std::vector<std::string> warnings;
};

struct ContextStages {
    StageBinding context_a;
    StageBinding context_b;
    StageBinding fusion;
};

/// Runs the two context calls in parallel, then the fusion call. If exactly
/// one context backend fails the fusion degrades to a single source with a
/// warning; if both fail, the error propagates.
inline FusedContext generate_fused_context(const corpus::RegionRecord& record,
                                           const std::string& crop_base64,
                                           gateway::Gateway& gw, const ContextStages& stages,
                                           const prompts::PromptSet& prompts) {
    auto call_context = [&](const StageBinding& stage) {
        auto request = build_context_prompt(record.english_caption, crop_base64, prompts, stage);
        return gw.complete(request);
    };
    auto future_a = std::async(std::launch::async, call_context, stages.context_a);
    auto future_b = std::async(std::launch::async, call_context, stages.context_b);

    FusedContext result;
    Conversation conv_a, conv_b;
    std::exception_ptr err_a, err_b;
    try {
        auto resp = future_a.get();
        conv_a = parse_conversation(resp.text, stages.context_a.backend_id);
        result.cache_keys.push_back(resp.cache_key);
    } catch (...) {
        err_a = std::current_exception();
    }
    try {
        auto resp = future_b.get();
        conv_b = parse_conversation(resp.text, stages.context_b.backend_id);
        result.cache_keys.push_back(resp.cache_key);
    } catch (...) {
        err_b = std::current_exception();
    }
    if (err_a && err_b) std::rethrow_exception(err_a);
    if (err_a || err_b) {
        const auto& stage = err_a ? stages.context_a : stages.context_b;
        result.warnings.push_back("context backend " + stage.backend_id +
                                  " failed; fusing a single conversation");
        if (err_a) conv_a.producer = stages.context_a.backend_id;
        if (err_b) conv_b.producer = stages.context_b.backend_id;
    }

    auto fusion_request = build_fusion_prompt(conv_a, conv_b, prompts, stages.fusion);
    auto fusion_resp = gw.complete(fusion_request);
    result.cache_keys.push_back(fusion_resp.cache_key);
    result.conversation = parse_conversation(fusion_resp.text, "fusion");
    return result;
}

struct ProbeResult {
    bool found = false;
    std::optional<int> stated;
    std::optional<bool> correct;
};

/// Deterministic hallucination check: the context prompt mandates a QA pair
/// stating the English caption's word count. Scans all QA pairs for it and
/// compares the first integer in the answer against the true count.
inline ProbeResult wordcount_probe(const Conversation& conv,
                                   const std::string& english_caption) {
    ProbeResult result;
    auto scan = [&](const std::vector<QAPair>& pairs) {
        for (const auto& qa : pairs) {
            if (result.found) return;
            std::string q = detail::lower_ascii(qa.question);
            bool mentions_count = q.find("word") != std::string::npos &&
                                  (q.find("how many") != std::string::npos ||
                                   q.find("number of") != std::string::npos ||
                                   q.find("count") != std::string::npos);
            if (!mentions_count) continue;
            result.found = true;
            // first decimal integer in the answer, if any
            const std::string& a = qa.answer;
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (std::isdigit(static_cast<unsigned char>(a[i]))) {
                    std::size_t end = i;
                    while (end < a.size() && std::isdigit(static_cast<unsigned char>(a[end])) &&
                           end - i < 9)
                        ++end;
                    result.stated = std::stoi(a.substr(i, end - i));
                    break;
                }
            }
            if (result.stated)
                result.correct = (*result.stated == text::word_count(english_caption));
        }
    };
    scan(conv.short_qa);
    scan(conv.complex_qa);
    return result;
}

}  // namespace capgen::dialogue
