// Copyright (C) 2026 The capgen authors
// SPDX-License-Identifier: Apache-2.0
//
// Coarse script classification for output validation. Only the scripts of
// the supported target languages are distinguished; every other letter
// falls into Script::other.
#pragma once

#include <string_view>

#include "capgen/corpus.hpp"
#include "capgen/text.hpp"
#include "capgen/utf8.hpp"

namespace capgen::script {

enum class Script { latin, devanagari, bengali, malayalam, other };

inline Script script_of(char32_t cp) {
    if ((cp >= 0x0041 && cp <= 0x005A) || (cp >= 0x0061 && cp <= 0x007A) ||
        (cp >= 0x00C0 && cp <= 0x024F) ||  // Latin-1 letters + Extended A/B (Hausa hooked letters)
        (cp >= 0x1E00 && cp <= 0x1EFF))
        return Script::latin;
    if (cp >= 0x0900 && cp <= 0x097F) return Script::devanagari;
    if (cp >= 0x0980 && cp <= 0x09FF) return Script::bengali;
    if (cp >= 0x0D00 && cp <= 0x0D7F) return Script::malayalam;
    return Script::other;
}

inline Script expected_script(corpus::LanguageTag lang) {
    switch (lang) {
        case corpus::LanguageTag::hi: return Script::devanagari;
        case corpus::LanguageTag::bn: return Script::bengali;
        case corpus::LanguageTag::ml: return Script::malayalam;
        case corpus::LanguageTag::ha: return Script::latin;
    }
    return Script::other;
}

struct ScriptCounts {
    long latin = 0;
    long devanagari = 0;
    long bengali = 0;
    long malayalam = 0;
    long other = 0;
    long total_letters = 0;

    long of(Script s) const {
        switch (s) {
            case Script::latin: return latin;
            case Script::devanagari: return devanagari;
            case Script::bengali: return bengali;
            case Script::malayalam: return malayalam;
            case Script::other: return other;
        }
        return 0;
    }
};

/// Counts letter codepoints per script; digits, punctuation and spaces are
/// ignored.
inline ScriptCounts count_scripts(std::string_view s) {
    ScriptCounts counts;
    std::size_t pos = 0;
    while (pos < s.size()) {
        char32_t cp = utf8::decode_one(s, pos);
        if (!text::is_letter(cp)) continue;
        ++counts.total_letters;
        switch (script_of(cp)) {
            case Script::latin: ++counts.latin; break;
            case Script::devanagari: ++counts.devanagari; break;
            case Script::bengali: ++counts.bengali; break;
            case Script::malayalam: ++counts.malayalam; break;
            case Script::other: ++counts.other; break;
        }
    }
    return counts;
}

}  // namespace capgen::script
