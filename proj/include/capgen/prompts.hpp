// Copyright (C) 2026 The capgen authors
// SPDX-License-Identifier: Apache-2.0
//
// Prompt templates. The compiled-in defaults are generated from
// templates/*.txt; a directory override lets experiments pin alternative
// wordings without rebuilding.
#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "capgen/corpus.hpp"
#include "capgen/errors.hpp"
#include "capgen/prompts_text.hpp"

namespace capgen::prompts {

struct PromptSet {
    std::string context_prompt = kContextPrompt;
    std::string caption_prompt = kCaptionPrompt;
    std::string fusion_prompt = kFusionPrompt;
    std::string translate_prompt = kTranslatePrompt;

    static PromptSet from_directory(const std::filesystem::path& dir) {
        PromptSet set;
        set.context_prompt = read(dir / "context_prompt.txt");
        set.caption_prompt = read(dir / "caption_prompt.txt");
        set.fusion_prompt = read(dir / "fusion_prompt.txt");
        set.translate_prompt = read(dir / "translate_prompt.txt");
        return set;
    }

private:
    static std::string read(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ConfigError("prompt template not found: " + path.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }
};

// Markers substituted for the prompt image slots. The actual image travels
// as a base64 attachment on the request, not inline in the text.
inline constexpr const char* kImageAttachedMarker = "[image attached]";
inline constexpr const char* kNoImageMarker = "[no image]";
inline constexpr const char* kExampleImageMarker = "[example image not included]";

}  // namespace capgen::prompts
