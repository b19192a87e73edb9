// Copyright (C) 2026 The capgen authors
// SPDX-License-Identifier: Apache-2.0
//
// Text preprocessing: lowercasing, punctuation stripping, whitespace
// normalization, and whitespace tokenization. All functions are total.
#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "capgen/unicode_tables.hpp"
#include "capgen/utf8.hpp"

namespace capgen::text {

namespace detail {

inline bool in_ranges(const unicode::Range* ranges, std::size_t count, char32_t cp) {
    const unicode::Range* end = ranges + count;
    auto it = std::upper_bound(ranges, end, cp, [](char32_t c, const unicode::Range& r) {
        return c < r.first;
    });
    return it != ranges && (it - 1)->last >= cp;
}

}  // namespace detail

inline bool is_punctuation(char32_t cp) {
    return detail::in_ranges(unicode::kPunctRanges, unicode::kPunctRangeCount, cp);
}

inline bool is_letter(char32_t cp) {
    return detail::in_ranges(unicode::kLetterRanges, unicode::kLetterRangeCount, cp);
}

inline char32_t to_lower(char32_t cp) {
    const unicode::LowerPair* begin = unicode::kLowerPairs;
    const unicode::LowerPair* end = begin + unicode::kLowerPairCount;
    auto it = std::lower_bound(begin, end, cp, [](const unicode::LowerPair& p, char32_t c) {
        return p.from < c;
    });
    if (it != end && it->from == cp) return it->to;
    return cp;
}

inline bool is_space(char32_t cp) {
    switch (cp) {
        case U' ': case U'\t': case U'\n': case U'\r': case U'\f': case U'\v':
        case 0x00A0: case 0x1680: case 0x2028: case 0x2029: case 0x202F:
        case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

/// Punctuation-set overrides. The builtin set is all Unicode P* categories
/// (which includes the Devanagari danda and double danda).
struct PreprocessOptions {
    std::set<char32_t> extra_punct;  // stripped in addition to P*
    std::set<char32_t> keep_punct;   // exempted from stripping
};

/// Lowercases, strips punctuation, collapses whitespace runs to single
/// spaces, and trims. Idempotent.
inline std::string preprocess_text(std::string_view input, const PreprocessOptions& opts = {}) {
    std::u32string cps = utf8::decode(input);
    std::string out;
    out.reserve(input.size());
    bool pending_space = false;
    bool at_start = true;
    for (char32_t cp : cps) {
        if (is_space(cp)) {
            pending_space = true;
            continue;
        }
        bool strip = (is_punctuation(cp) || opts.extra_punct.count(cp)) && !opts.keep_punct.count(cp);
        if (strip) continue;
        if (pending_space && !at_start) out.push_back(' ');
        pending_space = false;
        at_start = false;
        utf8::append(out, to_lower(cp));
    }
    return out;
}

/// Whitespace split of already-normalized text.
inline std::vector<std::string> split_tokens(std::string_view s) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && s[i] == ' ') ++i;
        std::size_t start = i;
        while (i < s.size() && s[i] != ' ') ++i;
        if (i > start) tokens.emplace_back(s.substr(start, i - start));
    }
    return tokens;
}

/// preprocess_text followed by whitespace split; the metric tokenizer.
inline std::vector<std::string> tokenize(std::string_view s, const PreprocessOptions& opts = {}) {
    return split_tokens(preprocess_text(s, opts));
}

/// Count of whitespace-delimited tokens after preprocessing.
inline int word_count(std::string_view s, const PreprocessOptions& opts = {}) {
    return static_cast<int>(tokenize(s, opts).size());
}

}  // namespace capgen::text
