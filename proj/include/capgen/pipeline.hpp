// Copyright (C) 2026 The capgen authors
// SPDX-License-Identifier: Apache-2.0
//
// Wires the per-record pipeline stages together: context generation with
// fusion, translation routing, weighted captioning. Owns nothing; callers
// provide the gateway, translators and embedder.
#pragma once

#include <functional>
#include <memory>
#include <string>

#include "capgen/captioner.hpp"
#include "capgen/corpus.hpp"
#include "capgen/dialogue.hpp"
#include "capgen/gateway.hpp"
#include "capgen/metrics/similarity.hpp"
#include "capgen/prompts.hpp"
#include "capgen/translation.hpp"

namespace capgen::pipeline {

struct Stages {
    dialogue::StageBinding context_a;
    dialogue::StageBinding context_b;
    dialogue::StageBinding fusion;
    dialogue::StageBinding caption;
    dialogue::StageBinding translate_llm;
};

class Pipeline {
public:
    Pipeline(gateway::Gateway& gw, translation::Translator& mt_translator,
             metrics::Embedder& embedder, prompts::PromptSet prompt_set, Stages stages)
        : gw_(gw),
          mt_(mt_translator),
          embedder_(embedder),
          prompts_(std::move(prompt_set)),
          stages_(std::move(stages)),
          llm_translator_(gw, stages_.translate_llm, prompts_) {}

    /// Optional provider of cropped-image base64 payloads; empty result
    /// means "no image available" and the pipeline proceeds without one.
    std::function<std::string(const corpus::RegionRecord&)> crop_provider;

    dialogue::FusedContext make_context(const corpus::RegionRecord& record) {
        std::string crop = crop_provider ? crop_provider(record) : std::string();
        return dialogue::generate_fused_context(
            record, crop, gw_,
            {stages_.context_a, stages_.context_b, stages_.fusion}, prompts_);
    }

    translation::TranslatedContext translate_context(const dialogue::Conversation& conv,
                                                     corpus::LanguageTag language) {
        auto chosen = translation::route(language);
        translation::Translator& translator =
            chosen.translator == translation::TranslatorKind::dedicated_mt
                ? mt_
                : static_cast<translation::Translator&>(llm_translator_);
        // the canonical serialization travels downstream; structure is kept
        // for validation only
        return translation::translate_conversation(conv, language, translator);
    }

    captioner::GeneratedCaption make_caption(const corpus::RegionRecord& record,
                                             const translation::TranslatedContext& context,
                                             const captioner::WeightConfig& weights,
                                             const std::vector<std::string>& upstream_keys) {
        return captioner::generate_caption(record, context, weights, gw_, prompts_,
                                           stages_.caption, upstream_keys);
    }

    gateway::Gateway& gw() { return gw_; }
    metrics::Embedder& embedder() { return embedder_; }
    const prompts::PromptSet& prompt_set() const { return prompts_; }
    const Stages& stages() const { return stages_; }
    translation::Translator& mt_translator() { return mt_; }

    std::string backends_description() const {
        return "context_a:" + stages_.context_a.backend_id +
               "|context_b:" + stages_.context_b.backend_id +
               "|fusion:" + stages_.fusion.backend_id +
               "|caption:" + stages_.caption.backend_id + "|translate:" + mt_.id();
    }

private:
    gateway::Gateway& gw_;
    translation::Translator& mt_;
    metrics::Embedder& embedder_;
    prompts::PromptSet prompts_;
    Stages stages_;
    translation::LlmTranslator llm_translator_;
};

}  // namespace capgen::pipeline
